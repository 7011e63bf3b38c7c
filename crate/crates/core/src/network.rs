//! Directed networks with integer capacities, and integer flow vectors over
//! their edges.

use std::ops::{Deref, DerefMut};

use crate::error::{FlowError, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub capacity: u64,
}

impl Edge {
    pub fn new(tail: NodeId, head: NodeId, capacity: u64) -> Self {
        Edge {
            tail,
            head,
            capacity,
        }
    }
}

/// A residual arc: the forward or reverse copy of a network edge.
///
/// Arc `2e` is the forward arc of edge `e` (residual `c_e - f_e`), arc
/// `2e + 1` its reverse (residual `f_e`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcId(usize);

impl ArcId {
    pub fn forward(edge: EdgeId) -> Self {
        ArcId(edge << 1)
    }

    pub fn reverse(edge: EdgeId) -> Self {
        ArcId((edge << 1) | 1)
    }

    pub fn edge(self) -> EdgeId {
        self.0 >> 1
    }

    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }

    /// The opposite arc of the same edge.
    pub fn twin(self) -> Self {
        ArcId(self.0 ^ 1)
    }
}

/// A flow network `G = (V, E)` with source, sink and capacities.
///
/// The edge list order is the canonical edge index space. Parallel and
/// anti-parallel edges are kept as distinct indices. Residual adjacency is
/// precomputed: the arcs leaving a node are listed in ascending edge index.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    node_count: usize,
    source: NodeId,
    sink: NodeId,
    edges: Vec<Edge>,
    arc_offsets: Vec<usize>,
    arcs: Vec<ArcId>,
}

impl PartialEq for FlowNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count
            && self.source == other.source
            && self.sink == other.sink
            && self.edges == other.edges
    }
}

impl Eq for FlowNetwork {}

impl FlowNetwork {
    pub fn new(node_count: usize, source: NodeId, sink: NodeId, edges: Vec<Edge>) -> Result<Self> {
        if node_count == 0 {
            return Err(FlowError::InvalidNetwork("network has no nodes".into()));
        }
        for node in [source, sink] {
            if node >= node_count {
                return Err(FlowError::NodeOutOfRange { node, node_count });
            }
        }
        if source == sink {
            return Err(FlowError::InvalidNetwork(
                "source and sink must differ".into(),
            ));
        }
        for (index, edge) in edges.iter().enumerate() {
            for node in [edge.tail, edge.head] {
                if node >= node_count {
                    return Err(FlowError::NodeOutOfRange { node, node_count });
                }
            }
            if edge.tail == edge.head {
                return Err(FlowError::InvalidNetwork(format!(
                    "edge {index} is a self-loop on node {}",
                    edge.tail
                )));
            }
        }

        let mut degree = vec![0usize; node_count + 1];
        for edge in &edges {
            degree[edge.tail + 1] += 1;
            degree[edge.head + 1] += 1;
        }
        for i in 1..=node_count {
            degree[i] += degree[i - 1];
        }
        let arc_offsets = degree;
        let mut fill = arc_offsets.clone();
        let mut arcs = vec![ArcId(0); edges.len() * 2];
        // Edges are visited in index order, so every node's arc list is sorted.
        for (index, edge) in edges.iter().enumerate() {
            arcs[fill[edge.tail]] = ArcId::forward(index);
            fill[edge.tail] += 1;
            arcs[fill[edge.head]] = ArcId::reverse(index);
            fill[edge.head] += 1;
        }

        Ok(FlowNetwork {
            node_count,
            source,
            sink,
            edges,
            arc_offsets,
            arcs,
        })
    }

    /// Same graph with a new capacity vector.
    pub fn with_capacities(&self, capacities: &[u64]) -> Result<Self> {
        check_len(self, capacities.len())?;
        let mut net = self.clone();
        for (edge, &capacity) in net.edges.iter_mut().zip(capacities) {
            edge.capacity = capacity;
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn sink(&self) -> NodeId {
        self.sink
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: EdgeId) -> Edge {
        self.edges[index]
    }

    pub fn capacities(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.capacity).collect()
    }

    pub fn is_terminal(&self, node: NodeId) -> bool {
        node == self.source || node == self.sink
    }

    /// Residual arcs leaving `node`, in ascending edge index.
    pub fn out_arcs(&self, node: NodeId) -> &[ArcId] {
        &self.arcs[self.arc_offsets[node]..self.arc_offsets[node + 1]]
    }

    pub fn arc_tail(&self, arc: ArcId) -> NodeId {
        let edge = &self.edges[arc.edge()];
        if arc.is_forward() {
            edge.tail
        } else {
            edge.head
        }
    }

    pub fn arc_head(&self, arc: ArcId) -> NodeId {
        let edge = &self.edges[arc.edge()];
        if arc.is_forward() {
            edge.head
        } else {
            edge.tail
        }
    }

    /// True when both networks have the same nodes, terminals and edge
    /// endpoints, so flow vectors of one are meaningful on the other.
    pub fn same_structure(&self, other: &FlowNetwork) -> bool {
        self.node_count == other.node_count
            && self.source == other.source
            && self.sink == other.sink
            && self.edges.len() == other.edges.len()
            && self
                .edges
                .iter()
                .zip(&other.edges)
                .all(|(a, b)| a.tail == b.tail && a.head == b.head)
    }
}

pub(crate) fn check_len(net: &FlowNetwork, len: usize) -> Result<()> {
    if len != net.edge_count() {
        return Err(FlowError::LengthMismatch {
            expected: net.edge_count(),
            found: len,
        });
    }
    Ok(())
}

/// One non-negative integer per edge index. Feasibility is not implied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Flow(Vec<u64>);

impl Flow {
    pub fn new(values: Vec<u64>) -> Self {
        Flow(values)
    }

    pub fn zeros(edge_count: usize) -> Self {
        Flow(vec![0; edge_count])
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }
}

impl From<Vec<u64>> for Flow {
    fn from(values: Vec<u64>) -> Self {
        Flow(values)
    }
}

impl Deref for Flow {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl DerefMut for Flow {
    fn deref_mut(&mut self) -> &mut [u64] {
        &mut self.0
    }
}
