//! Max-flow engine with warm starts from predicted flows.
//!
//! A prediction may violate capacities and conservation. [`warm_start_solve`]
//! clamps it, projects it to a feasible flow along short projection paths,
//! and finishes with ordinary Ford-Fulkerson (Edmonds-Karp or Dinic).
//! Around that core sit a median-based flow learner ([`learn`]), separable
//! grid generators ([`grid`]), a graph-cut segmentation front end
//! ([`segment`]), file codecs ([`io`]) and warm/cold benchmarking
//! ([`bench`]).

pub mod augment;
pub mod bench;
pub mod error;
pub mod flow;
pub mod grid;
pub mod io;
pub mod learn;
pub mod network;
pub mod segment;
pub mod stats;
pub mod warmstart;

pub use augment::{bfs_path, dinic_phase, max_flow, min_cut, AugPath, MinCut, SolveReport, Subroutine};
pub use error::{FlowError, Result};
pub use flow::{
    check_feasible, eta, flow_value, imbalance, l1_distance, residual, EtaMode, FeasibilityReport,
    Imbalance, ResidualView,
};
pub use learn::{canonical_optimum, empirical_risk, median_erm, sample_instances};
pub use network::{ArcId, Edge, EdgeId, Flow, FlowNetwork, NodeId};
pub use stats::PathStats;
pub use warmstart::{
    build_projection_aux, clamp_to_capacity, feasibility_projection, warm_start_solve,
    ProjectionRound, WarmStartReport,
};
