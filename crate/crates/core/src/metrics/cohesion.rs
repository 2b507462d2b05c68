//! Density and clustering coefficient.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::graph::{SimpleDigraph, UserId};

/// Directed density `|arcs| / (N (N - 1))`; 0 when there are fewer than two
/// nodes.
pub fn density(d: &SimpleDigraph) -> f64 {
    let n = d.node_count();
    if n <= 1 {
        return 0.0;
    }
    d.arc_count() as f64 / (n as f64 * (n as f64 - 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub per_node: BTreeMap<UserId, f64>,
    /// Mean over all nodes, 0 for an empty graph.
    pub average: f64,
}

/// Local clustering on the undirected projection of the arc set.
pub fn clustering(d: &SimpleDigraph) -> Clustering {
    let scores = clustering_scores(d);
    let average = if scores.is_empty() {
        0.0
    } else {
        scores.iter().sum::<f64>() / scores.len() as f64
    };
    Clustering {
        per_node: d.nodes().iter().cloned().zip(scores).collect(),
        average,
    }
}

/// Per-node coefficients indexed like `d.nodes()`.
pub fn clustering_scores(d: &SimpleDigraph) -> Vec<f64> {
    let adj = d.undirected_adjacency();
    (0..adj.len())
        .into_par_iter()
        .map(|v| {
            let k = adj[v].len();
            if k < 2 {
                return 0.0;
            }
            // each triangle through v is seen once from either neighbor
            let links: usize = adj[v]
                .iter()
                .map(|&u| sorted_intersection_len(&adj[v], &adj[u]))
                .sum();
            let triangles = (links / 2) as f64;
            2.0 * triangles / (k as f64 * (k as f64 - 1.0))
        })
        .collect()
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
