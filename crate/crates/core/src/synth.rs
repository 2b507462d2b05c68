//! Synthetic temporal networks with planted central-user roles.
//!
//! Every month the generator emits:
//! - a starter posting original tweets and being retweeted by isolates;
//! - influencers mentioned or retweeted by isolates (each isolate sticks to a
//!   single hub, hubs are filled round-robin so none stays empty);
//! - one engager retweeting a reserved tweet of the first influencer and
//!   mentioning `engager_out - 1` fresh audience users, at most one of whom
//!   replies;
//! - one builder mentioning `builder_links` hubs (influencers first, then the
//!   starter);
//! - optionally a bridge user retweeting the same reserved tweet.
//!
//! Only the starter posts original tweets, so once it drops out no user is
//! eligible to start the conversation.

use std::collections::BTreeMap;

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    next_month_start, Interaction, InteractionKind, Interval, TemporalGraph, UserId,
};
use crate::roles::Role;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid plant spec: {0}")]
pub struct SynthError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlantSpec {
    /// Isolates per month.
    pub n_isolates: usize,
    pub n_influencers: usize,
    pub engager_out: usize,
    pub builder_links: usize,
    pub plant_bridge: bool,
    pub months: usize,
    pub seed: u64,
    /// 1-based month from which the starter is silent.
    pub starter_dropout_month: Option<usize>,
    /// First instant of month 1 (rounded down to the calendar month).
    pub start: DateTime<Utc>,
}

impl Default for PlantSpec {
    fn default() -> Self {
        PlantSpec {
            n_isolates: 50,
            n_influencers: 3,
            engager_out: 20,
            builder_links: 2,
            plant_bridge: true,
            months: 3,
            seed: 7,
            starter_dropout_month: None,
            start: Utc.with_ymd_and_hms(2017, 3, 1, 0, 0, 0).unwrap(),
        }
    }
}

impl PlantSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.months == 0 {
            return Err(SynthError("months must be at least 1".into()));
        }
        if self.builder_links > self.n_influencers + 1 {
            return Err(SynthError(format!(
                "builder_links ({}) exceeds n_influencers + 1 ({})",
                self.builder_links,
                self.n_influencers + 1
            )));
        }
        if self.plant_bridge && self.n_influencers == 0 {
            return Err(SynthError("a bridge needs at least one influencer".into()));
        }
        if self.starter_dropout_month == Some(0) {
            return Err(SynthError("starter_dropout_month is 1-based".into()));
        }
        Ok(())
    }

    pub fn starter(&self) -> UserId {
        uid("starter")
    }

    pub fn influencer(&self, k: usize) -> UserId {
        uid(&format!("influencer{}", k + 1))
    }

    pub fn engager(&self) -> UserId {
        uid("engager")
    }

    pub fn builder(&self) -> UserId {
        uid("builder")
    }

    pub fn bridge(&self) -> UserId {
        uid("bridge")
    }

    /// Whether the starter is active in the 0-based month `m`.
    pub fn starter_active(&self, m: usize) -> bool {
        self.starter_dropout_month.is_none_or(|d| m + 1 < d)
    }

    /// The calendar months the generated stream covers.
    pub fn month_intervals(&self) -> Vec<Interval> {
        let mut out = Vec::with_capacity(self.months);
        let mut month = Interval::month_of(self.start);
        for _ in 0..self.months {
            out.push(month);
            month = Interval {
                start: month.end,
                end: next_month_start(month.end),
            };
        }
        out
    }
}

fn uid(s: &str) -> UserId {
    UserId::new(s).expect("generated handles are non-empty")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Planted {
    pub graph: TemporalGraph,
    pub ground_truth: BTreeMap<UserId, Role>,
}

struct MonthWriter<'a> {
    rng: &'a mut ChaCha8Rng,
    month: Interval,
    out: Vec<Interaction>,
}

impl MonthWriter<'_> {
    fn at(&mut self) -> DateTime<Utc> {
        let secs = (self.month.end - self.month.start).num_seconds();
        self.month.start + Duration::seconds(self.rng.gen_range(0..secs))
    }

    fn emit(
        &mut self,
        source: &UserId,
        target: &UserId,
        kind: InteractionKind,
        tweet: Option<String>,
    ) {
        let at = self.at();
        self.out.push(
            Interaction::new(source.clone(), target.clone(), kind, tweet, at)
                .expect("generator emits valid records"),
        );
    }
}

/// Builds the planted network; deterministic per spec.
pub fn generate(spec: &PlantSpec) -> Result<Planted, SynthError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let influencers: Vec<UserId> = (0..spec.n_influencers)
        .map(|k| spec.influencer(k))
        .collect();
    let (starter, engager, builder, bridge) = (
        spec.starter(),
        spec.engager(),
        spec.builder(),
        spec.bridge(),
    );
    const TWEETS_PER_HUB: usize = 4;

    let mut interactions = Vec::new();
    for (m, month) in spec.month_intervals().into_iter().enumerate() {
        let mut w = MonthWriter {
            rng: &mut rng,
            month,
            out: Vec::new(),
        };
        let starter_on = spec.starter_active(m);
        let tweet_of = |hub: &UserId, j: usize| format!("{hub}-m{}-t{j}", m + 1);

        if starter_on {
            for j in 0..TWEETS_PER_HUB {
                let at = w.at();
                w.out.push(Interaction::tweet(
                    starter.clone(),
                    Some(tweet_of(&starter, j)),
                    at,
                ));
            }
        }

        let mut hubs: Vec<&UserId> = Vec::new();
        if starter_on {
            hubs.push(&starter);
        }
        hubs.extend(influencers.iter());
        if !hubs.is_empty() {
            let mut isolates: Vec<UserId> = (0..spec.n_isolates)
                .map(|i| uid(&format!("iso{}_{i}", m + 1)))
                .collect();
            isolates.shuffle(w.rng);
            for (pos, iso) in isolates.iter().enumerate() {
                let hub = hubs[pos % hubs.len()];
                for _ in 0..w.rng.gen_range(1..=3) {
                    // tweet 0 of each hub is reserved for the engager/bridge pair
                    let tweet = tweet_of(hub, w.rng.gen_range(1..TWEETS_PER_HUB));
                    if *hub == starter || w.rng.gen_bool(0.5) {
                        w.emit(iso, hub, InteractionKind::Retweet, Some(tweet));
                    } else {
                        w.emit(iso, hub, InteractionKind::Mention, None);
                    }
                }
            }
        }

        let reserved_hub = influencers.first().unwrap_or(&starter);
        let reserved = tweet_of(reserved_hub, 0);
        if spec.engager_out > 0 && (starter_on || !influencers.is_empty()) {
            w.emit(
                &engager,
                reserved_hub,
                InteractionKind::Retweet,
                Some(reserved.clone()),
            );
            for j in 1..spec.engager_out {
                let fan = uid(&format!("aud{}_{j}", m + 1));
                w.emit(&engager, &fan, InteractionKind::Mention, None);
                if j == 1 && w.rng.gen_bool(0.5) {
                    w.emit(&fan, &engager, InteractionKind::Reply, None);
                }
            }
        }

        let linkable: Vec<&UserId> = influencers
            .iter()
            .chain(starter_on.then_some(&starter))
            .take(spec.builder_links)
            .collect();
        for hub in &linkable {
            w.emit(&builder, hub, InteractionKind::Mention, None);
        }

        if spec.plant_bridge {
            w.emit(
                &bridge,
                reserved_hub,
                InteractionKind::Retweet,
                Some(reserved),
            );
        }
        interactions.extend(w.out);
    }

    let graph =
        TemporalGraph::from_interactions(interactions).expect("generated records are valid");
    let mut ground_truth = BTreeMap::new();
    if spec.starter_dropout_month != Some(1) {
        ground_truth.insert(starter, Role::ConversationStarter);
    }
    for i in influencers {
        ground_truth.insert(i, Role::Influencer);
    }
    if spec.engager_out > 0 {
        ground_truth.insert(engager, Role::ActiveEngager);
    }
    if spec.builder_links > 0 {
        ground_truth.insert(builder, Role::NetworkBuilder);
    }
    if spec.plant_bridge {
        ground_truth.insert(bridge, Role::InformationBridge);
    }
    Ok(Planted {
        graph,
        ground_truth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spec_plants_every_role() {
        let p = generate(&PlantSpec::default()).unwrap();
        let count = |r: Role| p.ground_truth.values().filter(|&&x| x == r).count();
        assert_eq!(count(Role::ConversationStarter), 1);
        assert_eq!(count(Role::Influencer), 3);
        assert_eq!(count(Role::ActiveEngager), 1);
        assert_eq!(count(Role::NetworkBuilder), 1);
        assert_eq!(count(Role::InformationBridge), 1);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate(&PlantSpec::default()).unwrap();
        let b = generate(&PlantSpec::default()).unwrap();
        assert_eq!(a, b);
        let c = generate(&PlantSpec {
            seed: 8,
            ..Default::default()
        })
        .unwrap();
        assert_ne!(a.graph, c.graph);
    }

    #[test]
    fn stream_stays_inside_its_months() {
        let spec = PlantSpec::default();
        let p = generate(&spec).unwrap();
        let months = spec.month_intervals();
        let (lo, hi) = p.graph.span().unwrap();
        assert!(lo >= months[0].start && hi < months[2].end);
    }

    #[test]
    fn dropout_silences_starter() {
        let spec = PlantSpec {
            starter_dropout_month: Some(2),
            ..Default::default()
        };
        let p = generate(&spec).unwrap();
        let months = spec.month_intervals();
        let starter = spec.starter();
        assert!(p.graph.interactions().iter().all(|i| {
            !(i.timestamp() >= months[1].start
                && (i.source() == &starter || i.target() == &starter))
        }));
    }

    #[test]
    fn spec_validation() {
        let bad = |spec: PlantSpec| generate(&spec).is_err();
        assert!(bad(PlantSpec {
            months: 0,
            ..Default::default()
        }));
        assert!(bad(PlantSpec {
            builder_links: 5,
            ..Default::default()
        }));
        assert!(bad(PlantSpec {
            n_influencers: 0,
            builder_links: 0,
            ..Default::default()
        }));
        assert!(bad(PlantSpec {
            starter_dropout_month: Some(0),
            ..Default::default()
        }));
    }
}
