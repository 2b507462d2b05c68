//! Exact shortest-path betweenness (Brandes' accumulation).
//!
//! One BFS per source. Sources are split into fixed-size blocks whose size
//! depends only on the node count; each block is accumulated sequentially in
//! ascending source order and the block partials are summed in block order.
//! The serial and parallel drivers therefore perform the same floating-point
//! operations in the same order and return bit-identical vectors.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{SimpleDigraph, UserId};

/// Which shortest paths betweenness counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathMode {
    /// Directed paths along arcs, summed over ordered pairs.
    Directed,
    /// Paths in the undirected projection, summed over unordered pairs.
    #[default]
    Undirected,
}

impl std::str::FromStr for PathMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "directed" => Ok(PathMode::Directed),
            "undirected" => Ok(PathMode::Undirected),
            other => Err(format!("unknown path mode {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// Directed, unnormalized betweenness of every node, keyed by user.
pub fn betweenness(d: &SimpleDigraph) -> BTreeMap<UserId, f64> {
    keyed(
        d,
        &betweenness_scores(d, PathMode::Directed, Execution::Parallel),
    )
}

/// Undirected betweenness (unordered pairs) of every node, keyed by user.
pub fn betweenness_undirected(d: &SimpleDigraph) -> BTreeMap<UserId, f64> {
    keyed(
        d,
        &betweenness_scores(d, PathMode::Undirected, Execution::Parallel),
    )
}

fn keyed(d: &SimpleDigraph, scores: &[f64]) -> BTreeMap<UserId, f64> {
    d.nodes()
        .iter()
        .cloned()
        .zip(scores.iter().copied())
        .collect()
}

/// Betweenness indexed like `d.nodes()`.
pub fn betweenness_scores(d: &SimpleDigraph, mode: PathMode, exec: Execution) -> Vec<f64> {
    let n = d.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut scores = match mode {
        PathMode::Directed => {
            let out: Vec<&[usize]> = (0..n).map(|v| d.out_neighbors(v)).collect();
            let inc: Vec<&[usize]> = (0..n).map(|v| d.in_neighbors(v)).collect();
            brandes(&out, &inc, exec)
        }
        PathMode::Undirected => {
            let adj = d.undirected_adjacency();
            let view: Vec<&[usize]> = adj.iter().map(Vec::as_slice).collect();
            brandes(&view, &view, exec)
        }
    };
    if mode == PathMode::Undirected {
        // every unordered pair was visited from both ends
        for s in &mut scores {
            *s /= 2.0;
        }
    }
    scores
}

fn block_size(n: usize) -> usize {
    const MAX_BLOCKS: usize = 512;
    n.div_ceil(MAX_BLOCKS).max(16)
}

fn brandes(out: &[&[usize]], inc: &[&[usize]], exec: Execution) -> Vec<f64> {
    let n = out.len();
    let sources: Vec<usize> = (0..n).collect();
    let block = |chunk: &[usize]| {
        let mut ws = Workspace::new(n);
        let mut acc = vec![0.0; n];
        for &s in chunk {
            ws.accumulate(s, out, inc, &mut acc);
        }
        acc
    };
    let partials: Vec<Vec<f64>> = match exec {
        Execution::Serial => sources.chunks(block_size(n)).map(block).collect(),
        Execution::Parallel => sources.par_chunks(block_size(n)).map(block).collect(),
    };
    let mut total = vec![0.0; n];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total
}

struct Workspace {
    sigma: Vec<f64>,
    dist: Vec<u32>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

const UNSEEN: u32 = u32::MAX;

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            sigma: vec![0.0; n],
            dist: vec![UNSEEN; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    fn accumulate(&mut self, s: usize, out: &[&[usize]], inc: &[&[usize]], acc: &mut [f64]) {
        self.sigma[s] = 1.0;
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let next = self.dist[v] + 1;
            for &w in out[v] {
                if self.dist[w] == UNSEEN {
                    self.dist[w] = next;
                    self.queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        // predecessors of w are the in-neighbors one BFS level closer to s
        for &w in self.order.iter().rev() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            let level = self.dist[w];
            if level > 0 {
                for &v in inc[w] {
                    if self.dist[v] != UNSEEN && self.dist[v] + 1 == level {
                        self.delta[v] += self.sigma[v] * coeff;
                    }
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
        for &v in &self.order {
            self.sigma[v] = 0.0;
            self.dist[v] = UNSEEN;
            self.delta[v] = 0.0;
        }
        self.order.clear();
    }
}
