//! Augmenting-path search and the Ford-Fulkerson driver.
//!
//! Searches scan a node's residual arcs in ascending edge index and visit
//! nodes FIFO, so every solve is deterministic.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{FlowError, Result};
use crate::flow::{check_feasible, ResidualView};
use crate::network::{ArcId, Flow, FlowNetwork, NodeId};
use crate::stats::PathStats;

/// Path-finding subroutine used by Ford-Fulkerson.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum Subroutine {
    /// Shortest augmenting path by BFS.
    #[default]
    #[serde(rename = "ek")]
    EdmondsKarp,
    /// Level graph plus blocking flow.
    #[serde(rename = "dinic")]
    Dinic,
}

impl fmt::Display for Subroutine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subroutine::EdmondsKarp => "ek",
            Subroutine::Dinic => "dinic",
        })
    }
}

impl FromStr for Subroutine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ek" | "edmonds-karp" => Ok(Subroutine::EdmondsKarp),
            "dinic" => Ok(Subroutine::Dinic),
            other => Err(format!("unknown subroutine `{other}` (expected ek or dinic)")),
        }
    }
}

/// A path of positive-residual arcs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugPath {
    pub nodes: Vec<NodeId>,
    pub arcs: Vec<ArcId>,
    pub bottleneck: u64,
}

impl AugPath {
    /// Number of arcs.
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveReport {
    pub value: i64,
    pub stats: PathStats,
    pub elapsed: Duration,
}

/// Reusable BFS buffers.
#[derive(Debug, Default)]
pub(crate) struct Bfs {
    parent: Vec<Option<ArcId>>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: VecDeque<NodeId>,
}

impl Bfs {
    fn reset(&mut self, n: usize) {
        if self.stamp.len() != n {
            self.stamp = vec![0; n];
            self.parent = vec![None; n];
            self.epoch = 0;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.queue.clear();
    }

    fn seen(&self, node: NodeId) -> bool {
        self.stamp[node] == self.epoch
    }

    fn mark(&mut self, node: NodeId, via: Option<ArcId>) {
        self.stamp[node] = self.epoch;
        self.parent[node] = via;
    }

    /// Fewest-arc path from `from` to `to` over positive residual arcs.
    pub(crate) fn find(
        &mut self,
        residual: &ResidualView<'_>,
        from: NodeId,
        to: NodeId,
        stats: &mut PathStats,
    ) -> Option<AugPath> {
        let net = residual.network();
        self.reset(net.node_count());
        self.mark(from, None);
        self.queue.push_back(from);
        let mut found = false;
        'search: while let Some(u) = self.queue.pop_front() {
            stats.node_expansions += 1;
            for &arc in net.out_arcs(u) {
                let v = net.arc_head(arc);
                if self.seen(v) || residual.capacity(arc) == 0 {
                    continue;
                }
                self.mark(v, Some(arc));
                if v == to {
                    found = true;
                    break 'search;
                }
                self.queue.push_back(v);
            }
        }
        if !found {
            return None;
        }

        let mut arcs = Vec::new();
        let mut node = to;
        while let Some(arc) = self.parent[node] {
            arcs.push(arc);
            node = net.arc_tail(arc);
        }
        arcs.reverse();
        let bottleneck = arcs
            .iter()
            .map(|&a| residual.capacity(a))
            .min()
            .unwrap_or(0);
        let mut nodes = Vec::with_capacity(arcs.len() + 1);
        nodes.push(from);
        nodes.extend(arcs.iter().map(|&a| net.arc_head(a)));
        Some(AugPath {
            nodes,
            arcs,
            bottleneck,
        })
    }

    /// Marks every node reachable from `from`; returns the membership mask.
    pub(crate) fn reachable(&mut self, residual: &ResidualView<'_>, from: NodeId) -> Vec<bool> {
        let net = residual.network();
        self.reset(net.node_count());
        self.mark(from, None);
        self.queue.push_back(from);
        while let Some(u) = self.queue.pop_front() {
            for &arc in net.out_arcs(u) {
                let v = net.arc_head(arc);
                if !self.seen(v) && residual.capacity(arc) > 0 {
                    self.mark(v, Some(arc));
                    self.queue.push_back(v);
                }
            }
        }
        (0..net.node_count()).map(|v| self.seen(v)).collect()
    }
}

/// Shortest positive-residual path from `from` to `to`, if any.
///
/// Adds the nodes popped from the BFS queue to `stats.node_expansions`;
/// the caller records the path itself once it augments along it.
pub fn bfs_path(
    residual: &ResidualView<'_>,
    from: NodeId,
    to: NodeId,
    stats: &mut PathStats,
) -> Option<AugPath> {
    Bfs::default().find(residual, from, to, stats)
}

/// Pushes the path's bottleneck along every arc of the path.
pub fn augment_along(residual: &mut ResidualView<'_>, path: &AugPath) {
    for &arc in &path.arcs {
        residual.push(arc, path.bottleneck);
    }
}

/// One Dinic phase: BFS levels from `s`, then a blocking flow in the level
/// graph. Returns the amount pushed, 0 when `t` is unreachable.
pub fn dinic_phase(
    residual: &mut ResidualView<'_>,
    s: NodeId,
    t: NodeId,
    stats: &mut PathStats,
) -> u64 {
    let net = residual.network();
    let n = net.node_count();

    let mut level = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    level[s] = 0;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        stats.node_expansions += 1;
        if u == t {
            break;
        }
        for &arc in net.out_arcs(u) {
            let v = net.arc_head(arc);
            if level[v] == u32::MAX && residual.capacity(arc) > 0 {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if level[t] == u32::MAX {
        return 0;
    }

    // Iterative DFS with current-arc pointers.
    let mut next_arc = vec![0usize; n];
    let mut path: Vec<ArcId> = Vec::new();
    let mut pushed = 0u64;
    let mut u = s;
    stats.node_expansions += 1;
    loop {
        if u == t {
            let bottleneck = path
                .iter()
                .map(|&a| residual.capacity(a))
                .min()
                .expect("s != t");
            for &arc in &path {
                residual.push(arc, bottleneck);
            }
            pushed += bottleneck;
            stats.record_path(path.len());
            // Retreat to the tail of the first saturated arc.
            let cut = path
                .iter()
                .position(|&a| residual.capacity(a) == 0)
                .expect("bottleneck arc is saturated");
            u = net.arc_tail(path[cut]);
            path.truncate(cut);
            continue;
        }

        let arcs = net.out_arcs(u);
        let mut advanced = false;
        while next_arc[u] < arcs.len() {
            let arc = arcs[next_arc[u]];
            let v = net.arc_head(arc);
            if residual.capacity(arc) > 0 && level[v] == level[u] + 1 && level[v] <= level[t] {
                path.push(arc);
                u = v;
                stats.node_expansions += 1;
                advanced = true;
                break;
            }
            next_arc[u] += 1;
        }
        if advanced {
            continue;
        }

        // Dead end: drop u from the level graph and back up.
        level[u] = u32::MAX;
        match path.pop() {
            Some(arc) => {
                u = net.arc_tail(arc);
                next_arc[u] += 1;
            }
            None => break,
        }
    }
    pushed
}

/// Runs Ford-Fulkerson on `residual` until `t` is unreachable.
pub(crate) fn optimize(residual: &mut ResidualView<'_>, sub: Subroutine, stats: &mut PathStats) {
    let net = residual.network();
    let (s, t) = (net.source(), net.sink());
    match sub {
        Subroutine::EdmondsKarp => {
            let mut bfs = Bfs::default();
            while let Some(path) = bfs.find(residual, s, t, stats) {
                augment_along(residual, &path);
                stats.record_path(path.len());
            }
        }
        Subroutine::Dinic => while dinic_phase(residual, s, t, stats) > 0 {},
    }
}

/// Maximum flow, starting from the feasible flow `init` (zero when `None`).
pub fn max_flow(
    net: &FlowNetwork,
    init: Option<&Flow>,
    sub: Subroutine,
) -> Result<(Flow, SolveReport)> {
    let start = Instant::now();
    let init = match init {
        Some(f) => {
            let report = check_feasible(net, f)?;
            if !report.is_feasible() {
                return Err(FlowError::Infeasible {
                    capacity_violations: report.capacity_violations.len(),
                    conservation_violations: report.conservation_violations.len(),
                });
            }
            f.clone()
        }
        None => Flow::zeros(net.edge_count()),
    };
    let mut residual = ResidualView::new(net, init)?;
    let mut stats = PathStats::default();
    optimize(&mut residual, sub, &mut stats);
    let report = SolveReport {
        value: residual.value(),
        stats,
        elapsed: start.elapsed(),
    };
    Ok((residual.into_flow(), report))
}

/// Source side of a minimum cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCut {
    pub source_side: Vec<bool>,
    pub capacity: u64,
}

impl MinCut {
    pub fn nodes(&self) -> Vec<NodeId> {
        self.source_side
            .iter()
            .enumerate()
            .filter(|(_, &inside)| inside)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Nodes reachable from `s` in the residual graph of a maximum flow.
pub fn min_cut(net: &FlowNetwork, maxflow: &Flow) -> Result<MinCut> {
    let residual = ResidualView::new(net, maxflow.clone())?;
    let source_side = Bfs::default().reachable(&residual, net.source());
    if source_side[net.sink()] {
        return Err(FlowError::NotMaximum);
    }
    let capacity = net
        .edges()
        .iter()
        .filter(|e| source_side[e.tail] && !source_side[e.head])
        .map(|e| e.capacity)
        .sum();
    Ok(MinCut {
        source_side,
        capacity,
    })
}
