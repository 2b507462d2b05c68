//! Central-user role analysis for temporal Twitter interaction networks.
//!
//! Interactions are loaded into a [`TemporalGraph`], sliced into windows,
//! projected onto simple directed graphs and scored. The most central users
//! of each window are then labelled with conversational roles.

pub mod graph;
pub mod io;
pub mod metrics;
pub mod roles;
pub mod synth;
pub mod temporal;

pub use graph::{
    degrees, project, Degree, GraphError, GraphWindow, Interaction, InteractionKind, Interval,
    SimpleDigraph, TemporalGraph, UserId,
};
pub use metrics::{
    betweenness, clustering, communities, density, modularity, node_metrics, rank_top_k,
    Clustering, Execution, MetricsError, NodeMetrics, Partition, PathMode,
};
pub use roles::{
    classify, find_bridges, BridgeHop, BridgeMotif, Role, RoleAssignment, RoleError, RoleThresholds,
};
pub use temporal::{
    analyze_windows, trajectory, AnalysisOptions, TemporalError, Trajectory, TrajectoryPoint,
    WindowPlan, WindowReport,
};
