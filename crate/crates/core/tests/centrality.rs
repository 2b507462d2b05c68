mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::oracle::{distances, enumerate_paths, random_case, symmetrize, UNREACHABLE};
use common::{adjacency, node_name, random_digraph, rng, uid};
use netroles::graph::{SimpleDigraph, UserId};
use netroles::metrics::{
    betweenness, betweenness_scores, density, node_metrics, rank_top_k, Execution, NodeMetrics,
    PathMode,
};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn brandes_matches_path_enumeration_on_random_digraphs() {
    let started = Instant::now();
    for seed in 0..100 {
        let d = random_case(seed);
        let oracle = enumerate_paths(&adjacency(&d));
        let got = betweenness(&d);
        for (v, user) in d.nodes().iter().enumerate() {
            assert!(
                (got[user] - oracle[v]).abs() <= 1e-9,
                "seed {seed} node {user}: {} vs {}",
                got[user],
                oracle[v]
            );
        }
    }
    assert!(started.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn undirected_mode_matches_enumeration_on_symmetric_closure() {
    for seed in 100..140 {
        let d = random_case(seed);
        let oracle = enumerate_paths(&symmetrize(&adjacency(&d)));
        let got = betweenness_scores(&d, PathMode::Undirected, Execution::Serial);
        for v in 0..d.node_count() {
            // ordered pairs counted twice by the oracle
            assert!(
                (got[v] - oracle[v] / 2.0).abs() <= 1e-9,
                "seed {seed} node {v}"
            );
        }
    }
}

#[test]
fn total_betweenness_is_interior_path_mass() {
    for seed in 200..230 {
        let d = random_case(seed);
        let dist = distances(&adjacency(&d));
        let expected: f64 = dist
            .iter()
            .flatten()
            .filter(|&&x| x != UNREACHABLE && x >= 1)
            .map(|&x| (x - 1) as f64)
            .sum();
        let total: f64 = betweenness(&d).values().sum();
        assert!((total - expected).abs() <= 1e-9 * expected.max(1.0));
    }
}

#[test]
fn dag_endpoints_score_zero() {
    let mut r = rng(5);
    for _ in 0..20 {
        let n = 30;
        let nodes: Vec<UserId> = (0..n).map(|i| uid(&node_name(i))).collect();
        let mut arcs = Vec::new();
        for s in 0..n {
            for t in s + 1..n {
                if r.gen_bool(0.15) {
                    arcs.push((nodes[s].clone(), nodes[t].clone()));
                }
            }
        }
        let d = SimpleDigraph::from_arcs(nodes, arcs);
        let b = betweenness(&d);
        for v in 0..n {
            if d.in_degree(v) == 0 || d.out_degree(v) == 0 {
                assert_eq!(b[d.user(v)], 0.0);
            }
        }
    }
}

#[test]
fn analytic_cases() {
    let path = SimpleDigraph::from_arcs(
        [uid("a"), uid("b"), uid("c")],
        [(uid("a"), uid("b")), (uid("b"), uid("c"))],
    );
    let b = betweenness(&path);
    assert_eq!((b[&uid("a")], b[&uid("b")], b[&uid("c")]), (0.0, 1.0, 0.0));

    let leaves = ["l1", "l2", "l3", "l4"];
    let mut arcs = Vec::new();
    for l in leaves {
        arcs.push((uid("hub"), uid(l)));
        arcs.push((uid(l), uid("hub")));
    }
    let star = SimpleDigraph::from_arcs([uid("hub")], arcs);
    let b = betweenness(&star);
    assert_eq!(b[&uid("hub")], 12.0);
    assert!(leaves.iter().all(|l| b[&uid(l)] == 0.0));
}

#[test]
fn serial_and_parallel_are_bit_identical() {
    let mut r = rng(77);
    let d = random_digraph(&mut r, 700, 0.004);
    for mode in [PathMode::Directed, PathMode::Undirected] {
        let serial = betweenness_scores(&d, mode, Execution::Serial);
        let parallel = betweenness_scores(&d, mode, Execution::Parallel);
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&serial), bits(&parallel));
    }
}

fn relabel(d: &SimpleDigraph, perm: &[usize]) -> SimpleDigraph {
    let name = |v: usize| uid(&node_name(perm[v]));
    SimpleDigraph::from_arcs(
        (0..d.node_count()).map(name),
        d.arc_indices()
            .map(|(s, t)| (name(s), name(t)))
            .collect::<Vec<_>>(),
    )
}

fn metrics_strategy() -> impl Strategy<Value = Vec<NodeMetrics>> {
    prop::collection::vec((0u32..6, 0usize..5), 1..25).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (b, indeg))| NodeMetrics {
                user: uid(&node_name(i)),
                in_degree: indeg,
                out_degree: 0,
                betweenness: f64::from(b) * 0.5,
                rank: 0,
                weight: 0,
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn density_ignores_labels_and_grows_with_arcs(seed in 0u64..500, extra in 0usize..400) {
        let mut r = rng(seed);
        let n = r.gen_range(2..25);
        let d = random_digraph(&mut r, n, 0.2);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.reverse();
        prop_assert_eq!(density(&d), density(&relabel(&d, &perm)));

        let (s, t) = (extra % n, (extra / n) % n);
        if s != t {
            let mut arcs: Vec<(UserId, UserId)> = d.arcs().map(|(a, b)| (a.clone(), b.clone())).collect();
            arcs.push((d.user(s).clone(), d.user(t).clone()));
            let grown = SimpleDigraph::from_arcs(d.nodes().to_vec(), arcs);
            prop_assert!(density(&grown) >= density(&d));
        }
        prop_assert!((0.0..=1.0).contains(&density(&d)));
    }

    #[test]
    fn betweenness_follows_relabelling(seed in 0u64..300) {
        let d = random_case(seed);
        let n = d.node_count();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(n / 3);
        let moved = relabel(&d, &perm);
        let before = betweenness(&d);
        let after = betweenness(&moved);
        for v in 0..n {
            let a = before[d.user(v)];
            let b = after[&uid(&node_name(perm[v]))];
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn rank_top_k_ignores_input_order(metrics in metrics_strategy(), k in 1usize..30, rot in 0usize..25) {
        let mut shuffled = metrics.clone();
        let len = shuffled.len();
        shuffled.rotate_left(rot % len);
        shuffled.reverse();
        let a = rank_top_k(&metrics, k);
        let b = rank_top_k(&shuffled, k);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.len(), k.min(len));
        for (i, m) in a.iter().enumerate() {
            prop_assert_eq!(m.rank, i + 1);
        }
        for w in a.windows(2) {
            let ordered = w[0].betweenness > w[1].betweenness
                || (w[0].betweenness == w[1].betweenness
                    && (w[0].in_degree > w[1].in_degree
                        || (w[0].in_degree == w[1].in_degree && w[0].user < w[1].user)));
            prop_assert!(ordered);
        }
    }
}

#[test]
fn ranking_examples() {
    let m = |u: &str, b: f64, indeg: usize| NodeMetrics {
        user: uid(u),
        in_degree: indeg,
        out_degree: 0,
        betweenness: b,
        rank: 0,
        weight: 0,
    };
    let order: Vec<f64> = rank_top_k(&[m("a", 5.0, 0), m("b", 9.0, 0), m("c", 1.0, 0)], 10)
        .iter()
        .map(|x| x.betweenness)
        .collect();
    assert_eq!(order, [9.0, 5.0, 1.0]);
    let tied = rank_top_k(&[m("x", 7.0, 4), m("y", 7.0, 9)], 10);
    assert_eq!(tied[0].user, uid("y"));
    let six: Vec<NodeMetrics> = (0..6).map(|i| m(&node_name(i), i as f64, 0)).collect();
    assert_eq!(rank_top_k(&six, 10).len(), 6);
}

#[test]
fn node_metrics_rank_every_node() {
    let d = random_case(9);
    let metrics = node_metrics(&d, PathMode::Undirected);
    assert_eq!(metrics.len(), d.node_count());
    let ranks: Vec<usize> = metrics.iter().map(|m| m.rank).collect();
    assert_eq!(ranks, (1..=d.node_count()).collect::<Vec<_>>());
    let degrees: BTreeMap<&UserId, (usize, usize)> = metrics
        .iter()
        .map(|m| (&m.user, (m.in_degree, m.out_degree)))
        .collect();
    for (v, u) in d.nodes().iter().enumerate() {
        assert_eq!(degrees[u], (d.in_degree(v), d.out_degree(v)));
    }
}
