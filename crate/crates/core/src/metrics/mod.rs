//! Network measures over a [`SimpleDigraph`]: degree, betweenness, density,
//! clustering, communities and modularity, plus the betweenness ranking.

mod betweenness;
mod cohesion;
mod community;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use betweenness::{
    betweenness, betweenness_scores, betweenness_undirected, Execution, PathMode,
};
pub use cohesion::{clustering, clustering_scores, density, Clustering};
pub use community::{communities, modularity, Partition};

use crate::graph::{SimpleDigraph, UserId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("partition does not assign node {0}")]
    PartitionMissingNode(UserId),
}

/// Per-user measures for one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeMetrics {
    pub user: UserId,
    pub in_degree: usize,
    pub out_degree: usize,
    /// Unnormalized shortest-path betweenness.
    #[serde(with = "crate::io::fixed6")]
    pub betweenness: f64,
    /// 1 = highest betweenness.
    pub rank: usize,
    /// Raw non-tweet interactions behind the user's arcs (diagnostic).
    pub weight: u64,
}

/// Ranking order: betweenness descending, then in-degree descending, then
/// user id ascending.
pub fn rank_order(a: &NodeMetrics, b: &NodeMetrics) -> Ordering {
    b.betweenness
        .total_cmp(&a.betweenness)
        .then(b.in_degree.cmp(&a.in_degree))
        .then_with(|| a.user.cmp(&b.user))
}

/// Metrics for every node of `d`, sorted and ranked `1..=N`.
pub fn node_metrics(d: &SimpleDigraph, mode: PathMode) -> Vec<NodeMetrics> {
    let scores = betweenness_scores(d, mode, Execution::Parallel);
    let all: Vec<NodeMetrics> = (0..d.node_count())
        .map(|v| NodeMetrics {
            user: d.user(v).clone(),
            in_degree: d.in_degree(v),
            out_degree: d.out_degree(v),
            betweenness: scores[v],
            rank: 0,
            weight: d.interaction_weight(v),
        })
        .collect();
    rank_top_k(&all, all.len())
}

/// The `k` highest-ranked entries with `rank` set to `1..=min(k, N)`.
/// Independent of input order. `k = 0` yields nothing.
pub fn rank_top_k(metrics: &[NodeMetrics], k: usize) -> Vec<NodeMetrics> {
    let mut sorted = metrics.to_vec();
    sorted.sort_by(rank_order);
    sorted.truncate(k);
    for (i, m) in sorted.iter_mut().enumerate() {
        m.rank = i + 1;
    }
    sorted
}
