#![allow(dead_code)]

use chrono::{DateTime, Duration, TimeZone, Utc};
use netroles::graph::{Interaction, InteractionKind, SimpleDigraph, TemporalGraph, UserId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod oracle;

pub fn uid(s: &str) -> UserId {
    UserId::new(s).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Midnight UTC of a day in 2017.
pub fn day(month: u32, d: u32) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2017, month, d, 0, 0, 0).unwrap()
}

pub fn node_name(i: usize) -> String {
    format!("u{i:03}")
}

/// Erdős–Rényi digraph on `n` nodes named `u000..`.
pub fn random_digraph(r: &mut ChaCha8Rng, n: usize, p: f64) -> SimpleDigraph {
    let nodes: Vec<UserId> = (0..n).map(|i| uid(&node_name(i))).collect();
    let mut arcs = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t && r.gen_bool(p) {
                arcs.push((nodes[s].clone(), nodes[t].clone()));
            }
        }
    }
    SimpleDigraph::from_arcs(nodes, arcs)
}

/// Dense adjacency matrix of a digraph, indexed like `d.nodes()`.
pub fn adjacency(d: &SimpleDigraph) -> Vec<Vec<bool>> {
    let n = d.node_count();
    let mut a = vec![vec![false; n]; n];
    for (s, t) in d.arc_indices() {
        a[s][t] = true;
    }
    a
}

/// Random interaction stream over `users` handles, spread across the first
/// `months` months of 2017.
pub fn random_stream(seed: u64, users: usize, interactions: usize, months: u32) -> TemporalGraph {
    let mut r = rng(seed);
    let start = day(1, 1);
    let span = (day(1 + months, 1) - start).num_seconds();
    let mut out = Vec::with_capacity(interactions);
    for k in 0..interactions {
        let s = uid(&node_name(r.gen_range(0..users)));
        let at = start + Duration::seconds(r.gen_range(0..span));
        let rec = match r.gen_range(0..4) {
            0 => Interaction::tweet(s, Some(format!("t{k}")), at),
            kind => {
                let mut t = uid(&node_name(r.gen_range(0..users)));
                if t == s {
                    t = uid(&node_name((r.gen_range(1..users) + k) % users));
                }
                if t == s {
                    continue;
                }
                let (kind, tweet) = match kind {
                    1 => (
                        InteractionKind::Retweet,
                        Some(format!("t{}", r.gen_range(0..interactions / 4 + 1))),
                    ),
                    2 => (InteractionKind::Mention, None),
                    _ => (InteractionKind::Reply, None),
                };
                Interaction::new(s, t, kind, tweet, at).unwrap()
            }
        };
        out.push(rec);
    }
    TemporalGraph::from_interactions(out).unwrap()
}

pub fn retweet(s: &str, t: &str, tweet: &str, at: DateTime<Utc>) -> Interaction {
    Interaction::new(
        uid(s),
        uid(t),
        InteractionKind::Retweet,
        Some(tweet.to_string()),
        at,
    )
    .unwrap()
}

pub fn mention(s: &str, t: &str, at: DateTime<Utc>) -> Interaction {
    Interaction::new(uid(s), uid(t), InteractionKind::Mention, None, at).unwrap()
}

pub fn tweet(s: &str, id: &str, at: DateTime<Utc>) -> Interaction {
    Interaction::tweet(uid(s), Some(id.to_string()), at)
}

/// Builds one window's interactions to prescribed degree signatures.
///
/// Every hub is retweeted by its own private audience of leaf users, so the
/// in-degree of a hub is exactly the audience size plus explicit arcs.
#[derive(Default)]
pub struct Fixture {
    pub records: Vec<Interaction>,
    base: Option<DateTime<Utc>>,
    clock: i64,
    leaves: usize,
}

impl Fixture {
    pub fn new(month_start: DateTime<Utc>) -> Self {
        Fixture {
            base: Some(month_start),
            ..Default::default()
        }
    }

    fn at(&mut self) -> DateTime<Utc> {
        self.clock += 60;
        self.base.unwrap() + Duration::seconds(self.clock)
    }

    fn fresh_leaf(&mut self) -> String {
        self.leaves += 1;
        format!("leaf{:05}", self.leaves)
    }

    pub fn original(&mut self, user: &str, id: &str) -> &mut Self {
        let at = self.at();
        self.records.push(tweet(user, id, at));
        self
    }

    /// `n` distinct leaves retweet `hub`.
    pub fn audience(&mut self, hub: &str, n: usize) -> &mut Self {
        for _ in 0..n {
            let leaf = self.fresh_leaf();
            let at = self.at();
            self.records
                .push(retweet(&leaf, hub, &format!("{hub}-post"), at));
        }
        self
    }

    /// `user` mentions `n` distinct fresh leaves.
    pub fn broadcast(&mut self, user: &str, n: usize) -> &mut Self {
        for _ in 0..n {
            let leaf = self.fresh_leaf();
            let at = self.at();
            self.records.push(mention(user, &leaf, at));
        }
        self
    }

    pub fn link(&mut self, s: &str, t: &str) -> &mut Self {
        let at = self.at();
        self.records.push(mention(s, t, at));
        self
    }

    pub fn push(&mut self, i: Interaction) -> &mut Self {
        self.records.push(i);
        self
    }

    pub fn graph(&self) -> TemporalGraph {
        TemporalGraph::from_interactions(self.records.clone()).unwrap()
    }
}

/// Windows built to the degree signatures of the published monthly tables.
pub mod published {
    use super::{day, retweet, Fixture};
    use netroles::graph::TemporalGraph;

    /// March: siasatpk 211/1 (earliest original), qaiserthethia 139/12,
    /// alirazatweets 150/1, xaifoo_official 90/1, sugar9940 0/65, shahwar125
    /// 0/2 mentioning two influencers.
    pub fn march() -> Fixture {
        let mut f = Fixture::new(day(3, 1));
        f.original("siasatpk", "sia-0301")
            .audience("siasatpk", 211)
            .link("siasatpk", "qaiserthethia")
            .original("qaiserthethia", "qai-0301")
            .audience("qaiserthethia", 137)
            .broadcast("qaiserthethia", 12)
            .audience("alirazatweets", 148)
            .broadcast("alirazatweets", 1)
            .audience("xaifoo_official", 89)
            .broadcast("xaifoo_official", 1)
            .link("sugar9940", "alirazatweets")
            .link("sugar9940", "xaifoo_official")
            .broadcast("sugar9940", 63)
            .link("shahwar125", "qaiserthethia")
            .link("shahwar125", "alirazatweets");
        f
    }

    /// April: ptiofficial 266/1 posts first, siasatpk 137/3, qaiserthethia
    /// 107/12, amranafahad 116/2, sugar9940 0/41, ambitiousfree 0/7 linking
    /// ptiofficial and amranafahad.
    pub fn april() -> Fixture {
        let mut f = Fixture::new(day(4, 1));
        f.original("ptiofficial", "pti-0401")
            .original("siasatpk", "sia-0401")
            .audience("ptiofficial", 265)
            .broadcast("ptiofficial", 1)
            .audience("siasatpk", 137)
            .broadcast("siasatpk", 3)
            .audience("qaiserthethia", 107)
            .broadcast("qaiserthethia", 12)
            .audience("amranafahad", 115)
            .broadcast("amranafahad", 2)
            .broadcast("sugar9940", 41)
            .link("ambitiousfree", "ptiofficial")
            .link("ambitiousfree", "amranafahad")
            .broadcast("ambitiousfree", 5);
        f
    }

    /// March plus one information bridge: a fresh user and sugar9940 both
    /// retweet the same alirazatweets tweet.
    pub fn march_with_bridge() -> TemporalGraph {
        let mut f = march();
        f.original("alirazatweets", "T1")
            .push(retweet("quietrelay", "alirazatweets", "T1", day(3, 20)))
            .push(retweet("sugar9940", "alirazatweets", "T1", day(3, 21)));
        f.graph()
    }

    /// March where the low-degree user and the engager retweet different
    /// tweets of the same influencer: no bridge.
    pub fn march_without_bridge() -> TemporalGraph {
        let mut f = march();
        f.original("alirazatweets", "T1")
            .original("alirazatweets", "T2")
            .push(retweet("quietrelay", "alirazatweets", "T1", day(3, 20)))
            .push(retweet("sugar9940", "alirazatweets", "T2", day(3, 21)));
        f.graph()
    }
}
