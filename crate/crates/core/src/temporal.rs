//! Longitudinal analysis over an ordered sequence of windows.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use chrono::{DateTime, Duration, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{next_month_start, GraphWindow, Interval, TemporalGraph, UserId};
use crate::metrics::{
    clustering, communities, density, modularity, node_metrics, Execution, NodeMetrics, PathMode,
};
use crate::roles::{
    bridge_assignments, classify, find_bridges_in, BridgeMotif, Role, RoleAssignment, RoleError,
    RoleThresholds,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TemporalError {
    #[error("invalid window plan: {0}")]
    InvalidPlan(String),
    #[error("seed user {0} never appears in the input")]
    UnknownSeedUser(UserId),
    #[error(transparent)]
    Roles(#[from] RoleError),
}

/// How the analysis span is cut into windows.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowPlan {
    /// UTC calendar months covering `span` (or the graph's span).
    CalendarMonths { span: Option<Interval> },
    /// Consecutive windows of equal length starting at the span start.
    Fixed {
        duration: Duration,
        span: Option<Interval>,
    },
    /// Caller-supplied windows; must be ascending and non-overlapping.
    Explicit(Vec<Interval>),
}

impl WindowPlan {
    pub fn calendar_months() -> Self {
        WindowPlan::CalendarMonths { span: None }
    }

    pub fn intervals(&self, g: &TemporalGraph) -> Result<Vec<Interval>, TemporalError> {
        let graph_span = g.span().map(|(lo, hi)| Interval {
            start: lo,
            end: hi + Duration::seconds(1),
        });
        match self {
            WindowPlan::CalendarMonths { span } => {
                let Some(span) = span.or(graph_span) else {
                    return Ok(Vec::new());
                };
                let mut out = Vec::new();
                let mut month = Interval::month_of(span.start);
                loop {
                    out.push(month);
                    if month.end >= span.end {
                        break;
                    }
                    month = Interval {
                        start: month.end,
                        end: next_month_start(month.end),
                    };
                }
                Ok(out)
            }
            WindowPlan::Fixed { duration, span } => {
                if *duration <= Duration::zero() {
                    return Err(TemporalError::InvalidPlan(
                        "window duration must be positive".into(),
                    ));
                }
                let Some(span) = span.or(graph_span) else {
                    return Ok(Vec::new());
                };
                let mut out = Vec::new();
                let mut start = span.start;
                while start < span.end {
                    let end = start + *duration;
                    out.push(Interval { start, end });
                    start = end;
                }
                Ok(out)
            }
            WindowPlan::Explicit(intervals) => {
                for iv in intervals {
                    if iv.start >= iv.end {
                        return Err(TemporalError::InvalidPlan(format!("empty window {iv}")));
                    }
                }
                for pair in intervals.windows(2) {
                    if pair[1].start < pair[0].end {
                        return Err(TemporalError::InvalidPlan(format!(
                            "window {} overlaps or precedes {}",
                            pair[1], pair[0]
                        )));
                    }
                }
                Ok(intervals.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    pub thresholds: RoleThresholds,
    pub seed_user: Option<UserId>,
    pub louvain_seed: u64,
    /// Path semantics of the betweenness used for ranking and roles.
    pub centrality: PathMode,
    /// Whether windows are analyzed concurrently.
    pub execution: Execution,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            thresholds: RoleThresholds::default(),
            seed_user: None,
            louvain_seed: 0,
            centrality: PathMode::default(),
            execution: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub community_count: usize,
    /// Community sizes, largest first.
    pub sizes: Vec<usize>,
}

/// Everything computed for one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub interval: Interval,
    pub interaction_count: usize,
    pub node_count: usize,
    pub arc_count: usize,
    #[serde(with = "crate::io::fixed6")]
    pub density: f64,
    #[serde(with = "crate::io::fixed6")]
    pub avg_clustering: f64,
    #[serde(with = "crate::io::fixed6")]
    pub modularity: f64,
    pub partition: PartitionSummary,
    pub new_unique_users: usize,
    pub top_k: Vec<NodeMetrics>,
    pub roles: Vec<RoleAssignment>,
    pub bridges: Vec<BridgeMotif>,
    /// Every user with non-zero betweenness in this window.
    #[serde(with = "crate::io::fixed6::map")]
    pub betweenness: BTreeMap<UserId, f64>,
}

impl WindowReport {
    pub fn role_of(&self, user: &UserId) -> Option<Role> {
        self.roles.iter().find(|a| &a.user == user).map(|a| a.role)
    }

    pub fn holders(&self, role: Role) -> impl Iterator<Item = &UserId> {
        self.roles
            .iter()
            .filter(move |a| a.role == role)
            .map(|a| &a.user)
    }
}

/// Analyzes every window of `plan` independently; reports come back in
/// interval order.
pub fn analyze_windows(
    g: &TemporalGraph,
    plan: &WindowPlan,
    options: &AnalysisOptions,
) -> Result<Vec<WindowReport>, TemporalError> {
    options.thresholds.validate()?;
    if let Some(seed) = &options.seed_user {
        if !g.nodes().contains(seed) {
            return Err(TemporalError::UnknownSeedUser(seed.clone()));
        }
    }
    let intervals = plan.intervals(g)?;
    let fresh: Vec<usize> = new_unique_users(&intervals, g)
        .into_iter()
        .map(|(_, n)| n)
        .collect();
    let run =
        |(iv, fresh): (&Interval, &usize)| analyze_window(&g.window_over(*iv), *fresh, options);
    match options.execution {
        Execution::Serial => intervals.iter().zip(&fresh).map(run).collect(),
        Execution::Parallel => intervals.par_iter().zip(&fresh).map(run).collect(),
    }
}

/// One window's report; `new_unique_users` is supplied by the caller since it
/// depends on the whole stream.
pub fn analyze_window(
    w: &GraphWindow<'_>,
    new_unique_users: usize,
    options: &AnalysisOptions,
) -> Result<WindowReport, TemporalError> {
    let interval = w.interval();
    let d = w.project();
    let metrics = node_metrics(&d, options.centrality);
    let partition = communities(&d, options.louvain_seed);
    let q = modularity(&d, &partition).expect("louvain partition covers every node");
    let mut sizes = partition.sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));

    let seed = options.seed_user.as_ref().filter(|s| {
        let present = d.contains(s);
        if !present {
            log::warn!("seed user {s} is absent from window {interval}");
        }
        present
    });
    let mut roles = classify(&d, &metrics, &options.thresholds, seed)?;
    let bridges = find_bridges_in(w.interactions(), &d, &roles, &options.thresholds);
    roles.extend(bridge_assignments(&bridges, &metrics, interval));
    roles.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.user.cmp(&b.user)));

    let k = options.thresholds.top_k.min(metrics.len());
    Ok(WindowReport {
        interval,
        interaction_count: w.len(),
        node_count: d.node_count(),
        arc_count: d.arc_count(),
        density: density(&d),
        avg_clustering: clustering(&d).average,
        modularity: q,
        partition: PartitionSummary {
            community_count: partition.community_count(),
            sizes,
        },
        new_unique_users,
        top_k: metrics[..k].to_vec(),
        roles,
        bridges,
        betweenness: metrics
            .iter()
            .filter(|m| m.betweenness > 0.0)
            .map(|m| (m.user.clone(), m.betweenness))
            .collect(),
    })
}

/// Number of users whose first interaction (as source or target) over the
/// whole graph falls inside each window. `intervals` must be ascending and
/// disjoint.
pub fn new_unique_users(intervals: &[Interval], g: &TemporalGraph) -> Vec<(Interval, usize)> {
    let mut seen: HashSet<&UserId> = HashSet::new();
    let mut counts = vec![0usize; intervals.len()];
    for i in g.interactions() {
        let fresh = [i.source(), i.target()]
            .into_iter()
            .filter(|u| seen.insert(*u))
            .count();
        if fresh == 0 {
            continue;
        }
        if let Some(k) = locate(intervals, i.timestamp()) {
            counts[k] += fresh;
        }
    }
    intervals.iter().copied().zip(counts).collect()
}

fn locate(intervals: &[Interval], t: DateTime<Utc>) -> Option<usize> {
    let k = intervals.partition_point(|iv| iv.end <= t);
    intervals.get(k).filter(|iv| iv.contains(t)).map(|_| k)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub interval: Interval,
    /// Absent when the user is outside the window's top-k.
    pub rank: Option<usize>,
    #[serde(with = "crate::io::fixed6")]
    pub betweenness: f64,
    pub role: Option<Role>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub user: UserId,
    pub points: Vec<TrajectoryPoint>,
}

/// Rank, betweenness and role of one user across all reports.
pub fn trajectory(user: &UserId, reports: &[WindowReport]) -> Trajectory {
    let points = reports
        .iter()
        .map(|r| TrajectoryPoint {
            interval: r.interval,
            rank: r.top_k.iter().find(|m| &m.user == user).map(|m| m.rank),
            betweenness: r.betweenness.get(user).copied().unwrap_or(0.0),
            role: r.role_of(user),
        })
        .collect();
    Trajectory {
        user: user.clone(),
        points,
    }
}

/// For each user ever assigned a role, the `(window, role)` sequence.
pub fn role_persistence(reports: &[WindowReport]) -> BTreeMap<UserId, Vec<(Interval, Role)>> {
    let mut out: BTreeMap<UserId, Vec<(Interval, Role)>> = BTreeMap::new();
    for r in reports {
        for a in &r.roles {
            out.entry(a.user.clone())
                .or_default()
                .push((r.interval, a.role));
        }
    }
    out
}

/// Distinct users that held each role at least once.
pub fn role_holders(reports: &[WindowReport]) -> BTreeMap<Role, BTreeSet<UserId>> {
    let mut out: BTreeMap<Role, BTreeSet<UserId>> = BTreeMap::new();
    for r in reports {
        for a in &r.roles {
            out.entry(a.role).or_default().insert(a.user.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Interaction, InteractionKind};
    use chrono::TimeZone;

    fn uid(s: &str) -> UserId {
        UserId::new(s).unwrap()
    }

    fn day(m: u32, d: u32) -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2017, m, d, 12, 0, 0).unwrap()
    }

    fn mention(s: &str, t: &str, at: DateTime<Utc>) -> Interaction {
        Interaction::new(uid(s), uid(t), InteractionKind::Mention, None, at).unwrap()
    }

    #[test]
    fn calendar_plan_covers_span() {
        let g = TemporalGraph::from_interactions(vec![
            mention("a", "b", day(3, 5)),
            mention("a", "b", day(8, 31)),
        ])
        .unwrap();
        let ivs = WindowPlan::calendar_months().intervals(&g).unwrap();
        assert_eq!(ivs.len(), 6);
        assert_eq!(ivs[0].label(), "2017-03");
        assert_eq!(ivs[5].label(), "2017-08");
        assert!(ivs.windows(2).all(|p| p[0].end == p[1].start));
    }

    #[test]
    fn calendar_plan_with_span_override() {
        let span = Interval::new(
            Utc.with_ymd_and_hms(2017, 3, 1, 0, 0, 0).unwrap(),
            Utc.with_ymd_and_hms(2017, 9, 1, 0, 0, 0).unwrap(),
        )
        .unwrap();
        let ivs = WindowPlan::CalendarMonths { span: Some(span) }
            .intervals(&TemporalGraph::new())
            .unwrap();
        assert_eq!(ivs.len(), 6);
    }

    #[test]
    fn fixed_plan_and_validation() {
        let g = TemporalGraph::from_interactions(vec![
            mention("a", "b", day(3, 1)),
            mention("a", "b", day(3, 20)),
        ])
        .unwrap();
        let plan = WindowPlan::Fixed {
            duration: Duration::days(7),
            span: None,
        };
        let ivs = plan.intervals(&g).unwrap();
        assert_eq!(ivs.len(), 3);
        assert!(ivs.last().unwrap().contains(day(3, 20)));
        let bad = WindowPlan::Fixed {
            duration: Duration::zero(),
            span: None,
        };
        assert!(bad.intervals(&g).is_err());
        let overlapping = WindowPlan::Explicit(vec![
            Interval::new(day(3, 1), day(3, 10)).unwrap(),
            Interval::new(day(3, 5), day(3, 20)).unwrap(),
        ]);
        assert!(matches!(
            overlapping.intervals(&g),
            Err(TemporalError::InvalidPlan(_))
        ));
        let descending = WindowPlan::Explicit(vec![
            Interval::new(day(4, 1), day(4, 10)).unwrap(),
            Interval::new(day(3, 1), day(3, 10)).unwrap(),
        ]);
        assert!(descending.intervals(&g).is_err());
    }

    #[test]
    fn new_users_first_seen() {
        let g = TemporalGraph::from_interactions(vec![
            mention("a", "b", day(3, 2)),
            mention("b", "c", day(4, 2)),
        ])
        .unwrap();
        let ivs = WindowPlan::calendar_months().intervals(&g).unwrap();
        let counts: Vec<usize> = new_unique_users(&ivs, &g)
            .into_iter()
            .map(|(_, n)| n)
            .collect();
        assert_eq!(counts, [2, 1]);
    }

    #[test]
    fn empty_month_gives_zeroed_report() {
        let g = TemporalGraph::from_interactions(vec![
            mention("a", "b", day(3, 2)),
            mention("b", "c", day(5, 2)),
        ])
        .unwrap();
        let reports = analyze_windows(
            &g,
            &WindowPlan::calendar_months(),
            &AnalysisOptions::default(),
        )
        .unwrap();
        assert_eq!(reports.len(), 3);
        let april = &reports[1];
        assert_eq!(april.interval.label(), "2017-04");
        assert_eq!(
            (april.node_count, april.arc_count, april.new_unique_users),
            (0, 0, 0)
        );
        assert_eq!(
            (april.density, april.avg_clustering, april.modularity),
            (0.0, 0.0, 0.0)
        );
        assert!(april.top_k.is_empty() && april.roles.is_empty());
    }

    #[test]
    fn unknown_seed_is_a_configuration_error() {
        let g = TemporalGraph::from_interactions(vec![mention("a", "b", day(3, 2))]).unwrap();
        let options = AnalysisOptions {
            seed_user: Some(uid("nobody")),
            ..Default::default()
        };
        assert_eq!(
            analyze_windows(&g, &WindowPlan::calendar_months(), &options),
            Err(TemporalError::UnknownSeedUser(uid("nobody")))
        );
    }

    #[test]
    fn unknown_user_trajectory_has_zero_points() {
        let g = TemporalGraph::from_interactions(vec![
            mention("a", "b", day(3, 2)),
            mention("b", "c", day(4, 2)),
        ])
        .unwrap();
        let reports = analyze_windows(
            &g,
            &WindowPlan::calendar_months(),
            &AnalysisOptions::default(),
        )
        .unwrap();
        let t = trajectory(&uid("zed"), &reports);
        assert_eq!(t.points.len(), 2);
        assert!(t
            .points
            .iter()
            .all(|p| p.rank.is_none() && p.betweenness == 0.0 && p.role.is_none()));
    }
}
