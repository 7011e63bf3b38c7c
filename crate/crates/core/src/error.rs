use thiserror::Error;

use crate::network::{EdgeId, NodeId};
use crate::warmstart::ProjectionRound;

/// Errors raised by the flow engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("flow vector has {found} entries but the network has {expected} edges")]
    LengthMismatch { expected: usize, found: usize },
    #[error("edge {edge} carries {flow} units but its capacity is {capacity}")]
    CapacityViolation {
        edge: EdgeId,
        flow: u64,
        capacity: u64,
    },
    #[error(
        "flow is not feasible: {capacity_violations} capacity and {conservation_violations} conservation violations"
    )]
    Infeasible {
        capacity_violations: usize,
        conservation_violations: usize,
    },
    #[error("flow is not maximum: the sink is reachable in the residual graph")]
    NotMaximum,
    #[error("node {node} is out of range for a network with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("exact enumeration needs {states} states, over the budget of {budget}")]
    EnumerationBudget { states: u128, budget: u128 },
    #[error(
        "feasibility projection stalled after {round:?} with excess {excess} and deficit {deficit} left"
    )]
    ProjectionStalled {
        round: ProjectionRound,
        excess: u64,
        deficit: u64,
    },
    #[error("sample set is empty")]
    EmptySampleSet,
}

pub type Result<T, E = FlowError> = std::result::Result<T, E>;
