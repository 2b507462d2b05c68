//! Independent reference implementations the library is checked against.

use std::collections::{BTreeMap, BTreeSet};

use netroles::graph::{
    Interaction, InteractionKind, Interval, SimpleDigraph, TemporalGraph, UserId,
};
use netroles::roles::{BridgeHop, BridgeMotif, Role, RoleAssignment, RoleThresholds};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{adjacency, day, mention, random_digraph, retweet, rng, tweet};

pub const UNREACHABLE: usize = usize::MAX;

/// All-pairs hop distances by Floyd-Warshall.
pub fn distances(a: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != UNREACHABLE && d[k][j] != UNREACHABLE && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Betweenness by listing every shortest path of every ordered pair.
pub fn enumerate_paths(a: &[Vec<bool>]) -> Vec<f64> {
    let n = a.len();
    let d = distances(a);
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || d[s][t] == UNREACHABLE || d[s][t] < 2 {
                continue;
            }
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if last == t {
                    paths.push(path);
                    continue;
                }
                for next in 0..n {
                    if a[last][next]
                        && d[s][next] == path.len()
                        && d[next][t] != UNREACHABLE
                        && d[s][next] + d[next][t] == d[s][t]
                    {
                        let mut p = path.clone();
                        p.push(next);
                        stack.push(p);
                    }
                }
            }
            let share = 1.0 / paths.len() as f64;
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    b[v] += share;
                }
            }
        }
    }
    b
}

pub fn symmetrize(a: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| a[i][j] || a[j][i]).collect())
        .collect()
}

pub fn random_case(seed: u64) -> SimpleDigraph {
    let mut r = rng(seed);
    let n = r.gen_range(2..=40);
    let p = r.gen_range(0.1..=0.3);
    random_digraph(&mut r, n, p)
}

pub fn undirected_weights(d: &SimpleDigraph) -> Vec<Vec<f64>> {
    let a = adjacency(d);
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| f64::from(u8::from(a[i][j])) + f64::from(u8::from(a[j][i])))
                .collect()
        })
        .collect()
}

/// Q = 1/(2m) * sum_ij [A_ij - k_i k_j / (2m)] delta(c_i, c_j).
pub fn naive_modularity(d: &SimpleDigraph, labels: &[usize]) -> f64 {
    let a = undirected_weights(d);
    let n = a.len();
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every (bridge record, engager record) pair of retweets checked directly.
pub fn exhaustive_bridges(
    records: &[Interaction],
    assignments: &[RoleAssignment],
    degree: &BTreeMap<UserId, usize>,
    thresholds: &RoleThresholds,
) -> BTreeSet<BridgeMotif> {
    let role = |u: &UserId| assignments.iter().find(|a| &a.user == u).map(|a| a.role);
    let mut out = BTreeSet::new();
    for b in records {
        for a in records {
            let (Some(tb), Some(ta)) = (b.tweet_id(), a.tweet_id()) else {
                continue;
            };
            if b.kind() != InteractionKind::Retweet
                || a.kind() != InteractionKind::Retweet
                || tb != ta
            {
                continue;
            }
            let hop = match thresholds.bridge_hop {
                BridgeHop::SameTweet => b.target(),
                BridgeHop::ViaBridge => b.source(),
            };
            if role(b.target()) == Some(Role::Influencer)
                && role(b.source()).is_none()
                && degree[b.source()] <= thresholds.builder_degree_max
                && role(a.source()) == Some(Role::ActiveEngager)
                && a.target() == hop
            {
                out.insert(BridgeMotif {
                    bridge: b.source().clone(),
                    influencer: b.target().clone(),
                    engager: a.source().clone(),
                    tweet_id: tb.to_string(),
                });
            }
        }
    }
    out
}

/// Retweets over a small tweet pool plus some mentions and originals.
pub fn retweet_heavy_window(r: &mut ChaCha8Rng) -> TemporalGraph {
    let users = r.gen_range(6..30);
    let pool = r.gen_range(1..8);
    let name = |i: usize| format!("u{i:02}");
    let mut records = Vec::new();
    for k in 0..r.gen_range(20..1000) {
        let s = r.gen_range(0..users);
        let t = (s + r.gen_range(1..users)) % users;
        let at = day(3, 1) + chrono::Duration::minutes(k);
        records.push(match r.gen_range(0..10) {
            0 => tweet(&name(s), &format!("x{}", r.gen_range(0..pool)), at),
            1 => mention(&name(s), &name(t), at),
            _ => retweet(
                &name(s),
                &name(t),
                &format!("x{}", r.gen_range(0..pool)),
                at,
            ),
        });
    }
    TemporalGraph::from_interactions(records).unwrap()
}

/// Scans the records in time order and charges each unseen endpoint to the
/// window containing that record.
pub fn first_seen(intervals: &[Interval], g: &TemporalGraph) -> Vec<usize> {
    let mut records: Vec<&Interaction> = g.interactions().iter().collect();
    records.sort_by_key(|i| i.timestamp());
    let mut first: BTreeMap<&UserId, chrono::DateTime<chrono::Utc>> = BTreeMap::new();
    for i in records {
        for u in [i.source(), i.target()] {
            first.entry(u).or_insert(i.timestamp());
        }
    }
    intervals
        .iter()
        .map(|iv| first.values().filter(|&&t| iv.contains(t)).count())
        .collect()
}
