//! Community partition (Louvain) and Newman modularity on the undirected
//! weighted projection: an arc contributes weight 1 to its undirected edge,
//! so a reciprocated pair has weight 2.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::graph::{SimpleDigraph, UserId};

/// Assignment of every node to a community id; ids are dense from 0.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Partition {
    assignment: BTreeMap<UserId, usize>,
}

impl Partition {
    /// Relabels arbitrary labels to dense ids in order of first appearance
    /// over ascending user id.
    pub fn from_labels<L, I>(labels: I) -> Self
    where
        L: Eq + Hash,
        I: IntoIterator<Item = (UserId, L)>,
    {
        let sorted: BTreeMap<UserId, L> = labels.into_iter().collect();
        let mut dense: HashMap<L, usize> = HashMap::new();
        let assignment = sorted
            .into_iter()
            .map(|(u, l)| {
                let next = dense.len();
                (u, *dense.entry(l).or_insert(next))
            })
            .collect();
        Partition { assignment }
    }

    pub fn singletons(d: &SimpleDigraph) -> Self {
        Partition::from_labels(d.nodes().iter().cloned().enumerate().map(|(i, u)| (u, i)))
    }

    pub fn single_community(d: &SimpleDigraph) -> Self {
        Partition::from_labels(d.nodes().iter().cloned().map(|u| (u, 0u8)))
    }

    pub fn community_of(&self, user: &UserId) -> Option<usize> {
        self.assignment.get(user).copied()
    }

    pub fn assignment(&self) -> &BTreeMap<UserId, usize> {
        &self.assignment
    }

    pub fn community_count(&self) -> usize {
        self.assignment.values().max().map_or(0, |&m| m + 1)
    }

    /// Community sizes indexed by community id.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count()];
        for &c in self.assignment.values() {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Symmetric weighted adjacency; self-loops hold internal weight of
/// aggregated nodes.
#[derive(Debug, Clone)]
struct WeightedGraph {
    adj: Vec<Vec<(usize, f64)>>,
    loops: Vec<f64>,
    degree: Vec<f64>,
    // twice the total edge weight
    total: f64,
}

impl WeightedGraph {
    fn from_digraph(d: &SimpleDigraph) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = d
            .undirected_adjacency()
            .into_iter()
            .enumerate()
            .map(|(v, ns)| {
                ns.into_iter()
                    .map(|u| (u, (d.has_arc(v, u) as u8 + d.has_arc(u, v) as u8) as f64))
                    .collect()
            })
            .collect();
        let n = adj.len();
        WeightedGraph::assemble(adj, vec![0.0; n])
    }

    fn assemble(adj: Vec<Vec<(usize, f64)>>, loops: Vec<f64>) -> Self {
        let degree: Vec<f64> = adj
            .iter()
            .zip(&loops)
            .map(|(ns, l)| ns.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * l)
            .collect();
        let total = degree.iter().sum();
        WeightedGraph {
            adj,
            loops,
            degree,
            total,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn aggregate(&self, community: &[usize], count: usize) -> Self {
        let mut links: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); count];
        let mut loops = vec![0.0; count];
        for v in 0..self.len() {
            let cv = community[v];
            loops[cv] += self.loops[v];
            for &(u, w) in &self.adj[v] {
                let cu = community[u];
                if cu == cv {
                    // internal edges are listed from both endpoints
                    loops[cv] += w / 2.0;
                } else {
                    *links[cv].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        let adj = links.into_iter().map(|m| m.into_iter().collect()).collect();
        WeightedGraph::assemble(adj, loops)
    }
}

const GAIN_EPS: f64 = 1e-10;

/// One Louvain local-moving phase. Returns the community of each node and
/// whether any node moved.
fn local_moving(g: &WeightedGraph, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let n = g.len();
    let mut community: Vec<usize> = (0..n).collect();
    let mut tot = g.degree.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut link_w = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut moved = false;
    loop {
        let mut improved = false;
        for &v in &order {
            let cv = community[v];
            let kv = g.degree[v];
            for &(u, w) in &g.adj[v] {
                let cu = community[u];
                if link_w[cu] == 0.0 {
                    touched.push(cu);
                }
                link_w[cu] += w;
            }
            tot[cv] -= kv;
            let gain = |c: usize, link: f64| link - tot[c] * kv / g.total;
            let mut best = cv;
            let mut best_gain = gain(cv, link_w[cv]);
            touched.sort_unstable();
            for &c in &touched {
                let candidate = gain(c, link_w[c]);
                if c != cv && candidate > best_gain + GAIN_EPS {
                    best = c;
                    best_gain = candidate;
                }
            }
            tot[best] += kv;
            if best != cv {
                community[v] = best;
                improved = true;
                moved = true;
            }
            for &c in &touched {
                link_w[c] = 0.0;
            }
            touched.clear();
        }
        if !improved {
            break;
        }
    }
    (community, moved)
}

fn renumber(community: &[usize]) -> (Vec<usize>, usize) {
    let mut dense = vec![usize::MAX; community.len()];
    let mut next = 0;
    let out = community
        .iter()
        .map(|&c| {
            if dense[c] == usize::MAX {
                dense[c] = next;
                next += 1;
            }
            dense[c]
        })
        .collect();
    (out, next)
}

/// Louvain modularity maximization. The seed only shuffles the node visit
/// order; isolates stay in singleton communities.
pub fn communities(d: &SimpleDigraph, seed: u64) -> Partition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = WeightedGraph::from_digraph(d);
    let mut membership: Vec<usize> = (0..d.node_count()).collect();
    if graph.total > 0.0 {
        loop {
            let (community, moved) = local_moving(&graph, &mut rng);
            if !moved {
                break;
            }
            let (community, count) = renumber(&community);
            for m in &mut membership {
                *m = community[*m];
            }
            graph = graph.aggregate(&community, count);
        }
    }
    Partition::from_labels(d.nodes().iter().cloned().zip(membership))
}

/// Newman modularity `Σ_c (e_c / m − (d_c / 2m)²)`; 0 for an edgeless graph.
pub fn modularity(d: &SimpleDigraph, p: &Partition) -> Result<f64, MetricsError> {
    let labels: Vec<usize> = d
        .nodes()
        .iter()
        .map(|u| {
            p.community_of(u)
                .ok_or_else(|| MetricsError::PartitionMissingNode(u.clone()))
        })
        .collect::<Result<_, _>>()?;
    let g = WeightedGraph::from_digraph(d);
    if g.total == 0.0 {
        return Ok(0.0);
    }
    let m = g.total / 2.0;
    let count = labels.iter().max().map_or(0, |&c| c + 1);
    let mut internal = vec![0.0; count];
    let mut degree = vec![0.0; count];
    for v in 0..g.len() {
        degree[labels[v]] += g.degree[v];
        for &(u, w) in &g.adj[v] {
            if u > v && labels[u] == labels[v] {
                internal[labels[v]] += w;
            }
        }
    }
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(e, dc)| e / m - (dc / (2.0 * m)).powi(2))
        .sum())
}
