//! Warm-started Ford-Fulkerson.
//!
//! A prediction is first clamped to the capacities, then flow conservation
//! is restored by sending flow along projection paths in three ordered
//! rounds, and finally the feasible flow seeds an ordinary max-flow run.
//!
//! Each projection round runs BFS augmentation on an auxiliary network: the
//! residual graph of the current flow plus a super source `s*` and a super
//! sink `t*`. An `s*`-`t*` path there is exactly a projection path in the
//! residual graph with its two super arcs attached.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::augment::{augment_along, optimize, Bfs, Subroutine};
use crate::error::{FlowError, Result};
use crate::flow::{imbalance_of, source_outflow, ResidualView};
use crate::network::{check_len, ArcId, Edge, EdgeId, Flow, FlowNetwork, NodeId};
use crate::stats::PathStats;

/// The three projection rounds, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProjectionRound {
    /// Excess nodes to deficit nodes.
    ExcessToDeficit,
    /// Excess nodes back to the source.
    ExcessToSource,
    /// Sink to deficit nodes.
    SinkToDeficit,
}

impl ProjectionRound {
    pub const ORDER: [ProjectionRound; 3] = [
        ProjectionRound::ExcessToDeficit,
        ProjectionRound::ExcessToSource,
        ProjectionRound::SinkToDeficit,
    ];

    pub fn index(self) -> usize {
        match self {
            ProjectionRound::ExcessToDeficit => 0,
            ProjectionRound::ExcessToSource => 1,
            ProjectionRound::SinkToDeficit => 2,
        }
    }
}

/// What an auxiliary-network edge stands for in the original network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxEdge {
    /// Forward residual arc of an original edge.
    Forward(EdgeId),
    /// Reverse residual arc of an original edge.
    Backward(EdgeId),
    /// `s* -> u`.
    FromSuperSource(NodeId),
    /// `v -> t*`.
    ToSuperSink(NodeId),
}

/// Auxiliary network for one projection round.
///
/// Nodes `0..n` are the original nodes, `n` is `s*` and `n + 1` is `t*`.
/// Residual arcs with zero capacity are left out.
#[derive(Clone, Debug)]
pub struct AuxNetwork {
    pub network: FlowNetwork,
    pub origins: Vec<AuxEdge>,
}

impl AuxNetwork {
    pub fn super_source(&self) -> NodeId {
        self.network.source()
    }

    pub fn super_sink(&self) -> NodeId {
        self.network.sink()
    }

    pub fn super_source_arcs(&self) -> usize {
        self.origins
            .iter()
            .filter(|o| matches!(o, AuxEdge::FromSuperSource(_)))
            .count()
    }

    pub fn super_sink_arcs(&self) -> usize {
        self.origins
            .iter()
            .filter(|o| matches!(o, AuxEdge::ToSuperSink(_)))
            .count()
    }
}

/// Lowers every over-capacity entry to its capacity.
///
/// Returns the clamped flow and `sum_e max(f_e - c_e, 0)`.
pub fn clamp_to_capacity(net: &FlowNetwork, f_hat: &Flow) -> Result<(Flow, u64)> {
    check_len(net, f_hat.len())?;
    let mut clamp_total = 0u64;
    let clamped = net
        .edges()
        .iter()
        .zip(f_hat.iter())
        .map(|(edge, &x)| {
            clamp_total += x.saturating_sub(edge.capacity);
            x.min(edge.capacity)
        })
        .collect();
    Ok((Flow::new(clamped), clamp_total))
}

pub fn build_projection_aux(
    net: &FlowNetwork,
    f: &Flow,
    round: ProjectionRound,
) -> Result<AuxNetwork> {
    build_aux(net, f, round, false)
}

/// With `swapped`, the terminal side of rounds two and three uses the other
/// terminal: excess drains into `t`, deficit is fed from `s`. Only arcs
/// into `s` or out of `t` make this necessary.
fn build_aux(
    net: &FlowNetwork,
    f: &Flow,
    round: ProjectionRound,
    swapped: bool,
) -> Result<AuxNetwork> {
    let residual = ResidualView::new(net, f.clone())?;
    let imb = imbalance_of(net, f);
    let n = net.node_count();
    let (s_star, t_star) = (n, n + 1);

    let mut edges = Vec::with_capacity(net.edge_count() * 2 + n);
    let mut origins = Vec::with_capacity(edges.capacity());
    for (index, edge) in net.edges().iter().enumerate() {
        let forward = residual.forward(index);
        if forward > 0 {
            edges.push(Edge::new(edge.tail, edge.head, forward));
            origins.push(AuxEdge::Forward(index));
        }
        let reverse = residual.reverse(index);
        if reverse > 0 {
            edges.push(Edge::new(edge.head, edge.tail, reverse));
            origins.push(AuxEdge::Backward(index));
        }
    }

    let attach_excess = |edges: &mut Vec<Edge>, origins: &mut Vec<AuxEdge>| {
        for &u in &imb.a_prime {
            edges.push(Edge::new(s_star, u, imb.excess[u]));
            origins.push(AuxEdge::FromSuperSource(u));
        }
    };
    let attach_deficit = |edges: &mut Vec<Edge>, origins: &mut Vec<AuxEdge>| {
        for &v in &imb.b_prime {
            edges.push(Edge::new(v, t_star, imb.deficit[v]));
            origins.push(AuxEdge::ToSuperSink(v));
        }
    };
    match round {
        ProjectionRound::ExcessToDeficit => {
            attach_excess(&mut edges, &mut origins);
            attach_deficit(&mut edges, &mut origins);
        }
        ProjectionRound::ExcessToSource => {
            attach_excess(&mut edges, &mut origins);
            let drain = if swapped { net.sink() } else { net.source() };
            if imb.total_excess > 0 {
                edges.push(Edge::new(drain, t_star, imb.total_excess));
                origins.push(AuxEdge::ToSuperSink(drain));
            }
        }
        ProjectionRound::SinkToDeficit => {
            let feed = if swapped { net.source() } else { net.sink() };
            if imb.total_deficit > 0 {
                edges.push(Edge::new(s_star, feed, imb.total_deficit));
                origins.push(AuxEdge::FromSuperSource(feed));
            }
            attach_deficit(&mut edges, &mut origins);
        }
    }

    let network = FlowNetwork::new(n + 2, s_star, t_star, edges)?;
    Ok(AuxNetwork { network, origins })
}

/// One projection path, as reported to a projection observer.
#[derive(Clone, Debug)]
pub struct ProjectionStep<'a> {
    pub round: ProjectionRound,
    /// Node sequence in the original residual graph, super nodes removed.
    pub path: &'a [NodeId],
    pub amount: u64,
    /// The flow after this path was applied.
    pub flow: &'a Flow,
}

/// Path statistics of a feasibility projection, in total and per round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProjectionStats {
    pub total: PathStats,
    pub rounds: [PathStats; 3],
}

/// Restores flow conservation of a capacity-respecting flow.
pub fn feasibility_projection(net: &FlowNetwork, f: &Flow) -> Result<(Flow, ProjectionStats)> {
    feasibility_projection_observed(net, f, |_| {})
}

/// [`feasibility_projection`], calling `observer` after every path.
pub fn feasibility_projection_observed<F>(
    net: &FlowNetwork,
    f: &Flow,
    mut observer: F,
) -> Result<(Flow, ProjectionStats)>
where
    F: FnMut(&ProjectionStep<'_>),
{
    let mut flow = f.clone();
    let mut stats = ProjectionStats::default();
    let mut bfs = Bfs::default();
    // Validates lengths and capacities before any round runs.
    let mut imb = imbalance_of(net, ResidualView::new(net, f.clone())?.flow());

    let passes = ProjectionRound::ORDER.into_iter().flat_map(|round| {
        let swapped = round != ProjectionRound::ExcessToDeficit;
        std::iter::once((round, false)).chain(swapped.then_some((round, true)))
    });
    for (round, swapped) in passes {
        let ready = match round {
            ProjectionRound::ExcessToDeficit => imb.total_excess > 0 && imb.total_deficit > 0,
            ProjectionRound::ExcessToSource => imb.total_excess > 0,
            ProjectionRound::SinkToDeficit => imb.total_deficit > 0,
        };
        if !ready {
            continue;
        }

        let aux = build_aux(net, &flow, round, swapped)?;
        let (s_star, t_star) = (aux.super_source(), aux.super_sink());
        let mut aux_residual = ResidualView::zero(&aux.network);
        let round_stats = &mut stats.rounds[round.index()];
        while let Some(path) = bfs.find(&aux_residual, s_star, t_star, round_stats) {
            augment_along(&mut aux_residual, &path);
            for &arc in &path.arcs {
                apply_aux_arc(&mut flow, &aux, arc, path.bottleneck);
            }
            let inner = &path.nodes[1..path.nodes.len() - 1];
            round_stats.record_path(inner.len() - 1);
            observer(&ProjectionStep {
                round,
                path: inner,
                amount: path.bottleneck,
                flow: &flow,
            });
        }
        imb = imbalance_of(net, &flow);
    }

    if !imb.is_balanced() {
        return Err(FlowError::ProjectionStalled {
            round: ProjectionRound::SinkToDeficit,
            excess: imb.total_excess,
            deficit: imb.total_deficit,
        });
    }
    for round in stats.rounds {
        stats.total += round;
    }
    Ok((flow, stats))
}

fn apply_aux_arc(flow: &mut Flow, aux: &AuxNetwork, arc: ArcId, amount: u64) {
    // The reverse arc of an auxiliary edge undoes that edge's effect.
    let (edge, increase) = match aux.origins[arc.edge()] {
        AuxEdge::Forward(e) => (e, arc.is_forward()),
        AuxEdge::Backward(e) => (e, !arc.is_forward()),
        AuxEdge::FromSuperSource(_) | AuxEdge::ToSuperSink(_) => return,
    };
    if increase {
        flow[edge] += amount;
    } else {
        flow[edge] -= amount;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub clamp: Duration,
    pub projection: Duration,
    pub optimize: Duration,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct WarmStartReport {
    pub clamp_total: u64,
    pub post_clamp_excess: u64,
    pub post_clamp_deficit: u64,
    pub projection: ProjectionStats,
    /// Flow value after the projection.
    pub feasible_value: i64,
    pub optimal_value: i64,
    pub augment: PathStats,
    pub timings: PhaseTimings,
}

impl WarmStartReport {
    /// Node expansions over projection and optimization.
    pub fn node_expansions(&self) -> u64 {
        self.projection.total.node_expansions + self.augment.node_expansions
    }
}

/// Clamp, project and optimize, starting from the prediction `f_hat`.
pub fn warm_start_solve(
    net: &FlowNetwork,
    f_hat: &Flow,
    sub: Subroutine,
) -> Result<(Flow, WarmStartReport)> {
    let mut report = WarmStartReport::default();

    let started = Instant::now();
    let (clamped, clamp_total) = clamp_to_capacity(net, f_hat)?;
    let imb = imbalance_of(net, &clamped);
    report.clamp_total = clamp_total;
    report.post_clamp_excess = imb.total_excess;
    report.post_clamp_deficit = imb.total_deficit;
    report.timings.clamp = started.elapsed();

    let started = Instant::now();
    let (feasible, projection) = feasibility_projection(net, &clamped)?;
    report.projection = projection;
    report.feasible_value = source_outflow(net, &feasible);
    report.timings.projection = started.elapsed();

    let started = Instant::now();
    let mut residual = ResidualView::new(net, feasible)?;
    optimize(&mut residual, sub, &mut report.augment);
    report.optimal_value = residual.value();
    report.timings.optimize = started.elapsed();

    Ok((residual.into_flow(), report))
}
