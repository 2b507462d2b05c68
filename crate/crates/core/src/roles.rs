//! Central-user role classification and the information-bridge motif.
//!
//! Only the `top_k` users by betweenness rank that carry positive betweenness
//! are considered. Each candidate gets at most one role, checked in this
//! order:
//!
//! 1. *sink-like*: in-degree at least the nearest-rank quantile of the
//!    candidates' in-degrees (and at least 1), out-degree at most
//!    `sink_out_max`;
//! 2. conversation starter: the seed user if it is sink-like, otherwise the
//!    sink-like candidate with the earliest original tweet;
//! 3. influencer: every other sink-like candidate;
//! 4. network builder: low total degree and out-links to at least
//!    `min_influencers_linked` starters/influencers;
//! 5. active engager: small in-degree, out-degree above in-degree.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use chrono::SecondsFormat;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphWindow, Interaction, Interval, SimpleDigraph, UserId};
use crate::metrics::{rank_top_k, NodeMetrics};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoleError {
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
    #[error("seed user {0} does not occur in the graph")]
    UnknownSeedUser(UserId),
    #[error("no metrics supplied for node {0}")]
    MissingMetrics(UserId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    ConversationStarter,
    Influencer,
    ActiveEngager,
    NetworkBuilder,
    InformationBridge,
}

impl Role {
    pub const ALL: [Role; 5] = [
        Role::ConversationStarter,
        Role::Influencer,
        Role::ActiveEngager,
        Role::NetworkBuilder,
        Role::InformationBridge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::ConversationStarter => "ConversationStarter",
            Role::Influencer => "Influencer",
            Role::ActiveEngager => "ActiveEngager",
            Role::NetworkBuilder => "NetworkBuilder",
            Role::InformationBridge => "InformationBridge",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which record closes the bridge motif.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BridgeHop {
    /// The engager retweets the influencer's tweet itself (`A -> I`).
    #[default]
    SameTweet,
    /// The engager retweets it from the bridge (`A -> B`, same tweet id).
    ViaBridge,
}

/// Classification thresholds. Every count is configuration, not a constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoleThresholds {
    pub top_k: usize,
    pub sink_out_max: usize,
    pub engager_in_max: usize,
    pub builder_degree_max: usize,
    pub min_influencers_linked: usize,
    pub sink_in_min_quantile: f64,
    pub bridge_hop: BridgeHop,
}

impl Default for RoleThresholds {
    fn default() -> Self {
        RoleThresholds {
            top_k: 10,
            sink_out_max: 25,
            engager_in_max: 2,
            builder_degree_max: 25,
            min_influencers_linked: 2,
            sink_in_min_quantile: 0.5,
            bridge_hop: BridgeHop::SameTweet,
        }
    }
}

impl RoleThresholds {
    pub fn validate(&self) -> Result<(), RoleError> {
        if self.top_k == 0 {
            return Err(RoleError::InvalidThresholds(
                "top_k must be at least 1".into(),
            ));
        }
        let q = self.sink_in_min_quantile;
        if !(q > 0.0 && q <= 1.0) {
            return Err(RoleError::InvalidThresholds(format!(
                "sink_in_min_quantile must be in (0, 1], got {q}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleAssignment {
    pub user: UserId,
    pub window: Interval,
    pub role: Role,
    pub rank: usize,
    /// Operand values of the rule that fired.
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BridgeMotif {
    pub bridge: UserId,
    pub influencer: UserId,
    pub engager: UserId,
    pub tweet_id: String,
}

/// Nearest-rank quantile: the `ceil(q * n)`-th smallest value.
fn nearest_rank(values: &[usize], q: f64) -> usize {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let idx = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[idx - 1]
}

/// Assigns roles to the top-ranked users of one window.
///
/// `metrics` must cover every node of `d`; the window recorded in each
/// assignment is `d.interval()`.
pub fn classify(
    d: &SimpleDigraph,
    metrics: &[NodeMetrics],
    thresholds: &RoleThresholds,
    seed_user: Option<&UserId>,
) -> Result<Vec<RoleAssignment>, RoleError> {
    thresholds.validate()?;
    let by_user: HashMap<&UserId, &NodeMetrics> = metrics.iter().map(|m| (&m.user, m)).collect();
    if let Some(missing) = d.nodes().iter().find(|u| !by_user.contains_key(u)) {
        return Err(RoleError::MissingMetrics(missing.clone()));
    }
    if let Some(seed) = seed_user {
        if !d.contains(seed) {
            return Err(RoleError::UnknownSeedUser(seed.clone()));
        }
    }

    let candidates: Vec<NodeMetrics> = rank_top_k(metrics, thresholds.top_k)
        .into_iter()
        .filter(|m| m.betweenness > 0.0 && d.contains(&m.user))
        .collect();
    if candidates.is_empty() {
        return Ok(Vec::new());
    }

    let in_degrees: Vec<usize> = candidates.iter().map(|m| m.in_degree).collect();
    let sink_in_min = nearest_rank(&in_degrees, thresholds.sink_in_min_quantile).max(1);
    let sink_like =
        |m: &NodeMetrics| m.in_degree >= sink_in_min && m.out_degree <= thresholds.sink_out_max;
    let degree_facts = |m: &NodeMetrics| {
        vec![
            format!("in_degree={}", m.in_degree),
            format!("out_degree={}", m.out_degree),
            format!("betweenness={:.3}", m.betweenness),
        ]
    };
    let sink_facts = |m: &NodeMetrics| {
        let mut facts = degree_facts(m);
        facts.push(format!("sink_in_min={sink_in_min}"));
        facts.push(format!("sink_out_max={}", thresholds.sink_out_max));
        facts
    };

    let window = d.interval();
    let origins = d.origin_index();
    let sinks: Vec<&NodeMetrics> = candidates.iter().filter(|m| sink_like(m)).collect();

    let seeded = seed_user.and_then(|seed| {
        let hit = sinks.iter().copied().find(|m| &m.user == seed);
        if hit.is_none() {
            log::warn!(
                "seed user {seed} is not a sink-like top-{} user in {window}; using earliest original tweet",
                thresholds.top_k
            );
        }
        hit
    });
    let starter: Option<(&NodeMetrics, String)> = match seeded {
        Some(m) => Some((m, "designated=seed_user".to_string())),
        None => sinks
            .iter()
            .filter_map(|m| origins.get(&m.user).map(|t| (*t, *m)))
            .min_by(|(ta, a), (tb, b)| ta.cmp(tb).then(a.rank.cmp(&b.rank)))
            .map(|(t, m)| {
                (
                    m,
                    format!(
                        "earliest_origin={}",
                        t.to_rfc3339_opts(SecondsFormat::Secs, true)
                    ),
                )
            }),
    };

    let mut assigned: BTreeMap<usize, RoleAssignment> = BTreeMap::new();
    let mut hubs: BTreeSet<&UserId> = BTreeSet::new();
    let mut assign = |m: &NodeMetrics, role: Role, evidence: Vec<String>| {
        assigned.insert(
            m.rank,
            RoleAssignment {
                user: m.user.clone(),
                window,
                role,
                rank: m.rank,
                evidence,
            },
        );
    };

    if let Some((m, why)) = &starter {
        let mut facts = sink_facts(m);
        facts.push(why.clone());
        assign(m, Role::ConversationStarter, facts);
        hubs.insert(&m.user);
    }
    for m in &sinks {
        if starter.as_ref().is_some_and(|(s, _)| s.user == m.user) {
            continue;
        }
        assign(m, Role::Influencer, sink_facts(m));
        hubs.insert(&m.user);
    }

    for m in candidates.iter().filter(|m| !sink_like(m)) {
        let v = d.index_of(&m.user).expect("candidate is a node");
        let linked: Vec<&str> = d
            .out_neighbors(v)
            .iter()
            .map(|&u| d.user(u))
            .filter(|u| hubs.contains(u))
            .map(UserId::as_str)
            .collect();
        let total = m.in_degree + m.out_degree;
        if total <= thresholds.builder_degree_max
            && linked.len() >= thresholds.min_influencers_linked
        {
            let mut facts = degree_facts(m);
            facts.push(format!("degree_total={total}"));
            facts.push(format!("linked_hubs={}", linked.join("|")));
            assign(m, Role::NetworkBuilder, facts);
        } else if m.in_degree <= thresholds.engager_in_max && m.out_degree > m.in_degree {
            let mut facts = degree_facts(m);
            facts.push(format!("engager_in_max={}", thresholds.engager_in_max));
            assign(m, Role::ActiveEngager, facts);
        }
    }

    Ok(assigned.into_values().collect())
}

/// Searches the window for bridge motifs against the given role assignments.
pub fn find_bridges(
    w: &GraphWindow<'_>,
    assignments: &[RoleAssignment],
    thresholds: &RoleThresholds,
) -> Vec<BridgeMotif> {
    find_bridges_in(w.interactions(), &w.project(), assignments, thresholds)
}

/// [`find_bridges`] over pre-projected window data.
pub fn find_bridges_in(
    interactions: &[Interaction],
    d: &SimpleDigraph,
    assignments: &[RoleAssignment],
    thresholds: &RoleThresholds,
) -> Vec<BridgeMotif> {
    let role_of: HashMap<&UserId, Role> = assignments.iter().map(|a| (&a.user, a.role)).collect();
    let low_degree = |u: &UserId| {
        d.index_of(u)
            .is_some_and(|v| d.in_degree(v) + d.out_degree(v) <= thresholds.builder_degree_max)
    };

    let mut by_tweet: BTreeMap<&str, Vec<&Interaction>> = BTreeMap::new();
    for i in interactions.iter().filter(|i| i.is_motif_eligible()) {
        by_tweet.entry(i.tweet_id().unwrap()).or_default().push(i);
    }

    let mut found: BTreeSet<BridgeMotif> = BTreeSet::new();
    for (tweet, records) in &by_tweet {
        let engager_retweeted = |engager: &UserId, target: &UserId| {
            records
                .iter()
                .any(|r| r.source() == engager && r.target() == target)
        };
        for r in records {
            let (bridge, influencer) = (r.source(), r.target());
            if role_of.get(influencer) != Some(&Role::Influencer)
                || role_of.contains_key(bridge)
                || !low_degree(bridge)
            {
                continue;
            }
            for a in assignments.iter().filter(|a| a.role == Role::ActiveEngager) {
                let hop_target = match thresholds.bridge_hop {
                    BridgeHop::SameTweet => influencer,
                    BridgeHop::ViaBridge => bridge,
                };
                if engager_retweeted(&a.user, hop_target) {
                    found.insert(BridgeMotif {
                        bridge: bridge.clone(),
                        influencer: influencer.clone(),
                        engager: a.user.clone(),
                        tweet_id: tweet.to_string(),
                    });
                }
            }
        }
    }
    debug_assert!(found
        .iter()
        .all(|m| m.bridge != m.influencer && m.bridge != m.engager));
    found.into_iter().collect()
}

/// One `InformationBridge` assignment per distinct bridge user, ranked by its
/// position in `metrics`.
pub fn bridge_assignments(
    motifs: &[BridgeMotif],
    metrics: &[NodeMetrics],
    window: Interval,
) -> Vec<RoleAssignment> {
    let rank_of: HashMap<&UserId, usize> = metrics.iter().map(|m| (&m.user, m.rank)).collect();
    let mut per_bridge: BTreeMap<&UserId, Vec<String>> = BTreeMap::new();
    for m in motifs {
        per_bridge.entry(&m.bridge).or_default().push(format!(
            "tweet_id={} influencer={} engager={}",
            m.tweet_id, m.influencer, m.engager
        ));
    }
    per_bridge
        .into_iter()
        .map(|(user, evidence)| RoleAssignment {
            user: user.clone(),
            window,
            role: Role::InformationBridge,
            rank: rank_of.get(user).copied().unwrap_or(0),
            evidence,
        })
        .collect()
}
