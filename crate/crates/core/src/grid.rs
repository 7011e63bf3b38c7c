//! Separable grid networks and d-local transitions between them.
//!
//! The interior nodes form an `n x n` grid with both directed edges between
//! 4-neighbours. A region mask splits the grid into `V` (inside) and `W`
//! (outside). Grid edges crossing the split get capacity 1, every other
//! edge capacity `M`. Inside nodes may be attached to the sink and outside
//! nodes to the source, all with capacity `M`.

use thiserror::Error;

use crate::network::{Edge, FlowNetwork, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("grid side must be positive")]
    EmptyGrid,
    #[error("mask has {found} cells, expected {expected}")]
    MaskSize { expected: usize, found: usize },
    #[error("no node inside the region is attached to the sink")]
    NoSinkWitness,
    #[error("no node outside the region is attached to the source")]
    NoSourceWitness,
    #[error("sink-attached node {0} lies outside the region")]
    SinkWitnessOutside(NodeId),
    #[error("source-attached node {0} lies inside the region")]
    SourceWitnessInside(NodeId),
    #[error("node {node} is outside a {side}x{side} grid")]
    NodeOutOfGrid { node: NodeId, side: usize },
}

/// Row-major membership mask of an `n x n` grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegionMask {
    side: usize,
    inside: Vec<bool>,
}

impl RegionMask {
    pub fn empty(side: usize) -> Self {
        RegionMask {
            side,
            inside: vec![false; side * side],
        }
    }

    pub fn full(side: usize) -> Self {
        RegionMask {
            side,
            inside: vec![true; side * side],
        }
    }

    pub fn from_cells(side: usize, inside: Vec<bool>) -> Result<Self, GridError> {
        if inside.len() != side * side {
            return Err(GridError::MaskSize {
                expected: side * side,
                found: inside.len(),
            });
        }
        Ok(RegionMask { side, inside })
    }

    /// Axis-aligned rectangle, clipped to the grid.
    pub fn rectangle(side: usize, top: usize, left: usize, height: usize, width: usize) -> Self {
        let mut mask = RegionMask::empty(side);
        for r in top..(top + height).min(side) {
            for c in left..(left + width).min(side) {
                mask.set(r, c, true);
            }
        }
        mask
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cells(&self) -> &[bool] {
        &self.inside
    }

    pub fn node(&self, row: usize, col: usize) -> NodeId {
        row * self.side + col
    }

    pub fn position(&self, node: NodeId) -> (usize, usize) {
        (node / self.side, node % self.side)
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.inside[self.node(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, inside: bool) {
        let node = self.node(row, col);
        self.inside[node] = inside;
    }

    pub fn count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    /// Undirected grid-neighbour pairs, row-major, right neighbour first.
    fn neighbour_pairs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        let n = self.side;
        (0..n * n).flat_map(move |u| {
            let (r, c) = (u / n, u % n);
            let right = (c + 1 < n).then_some((u, u + 1));
            let down = (r + 1 < n).then_some((u, u + n));
            right.into_iter().chain(down)
        })
    }

    /// Directed grid edges entering the region from outside. This is the
    /// max-flow value of a separable grid built from this mask.
    pub fn boundary_into(&self) -> usize {
        self.neighbour_pairs()
            .filter(|&(u, v)| self.inside[u] != self.inside[v])
            .count()
    }
}

/// Which nodes are joined to the terminals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attachment {
    /// Every region node to the sink, every other node from the source.
    Dense,
    /// Only the listed nodes: `sink` nodes get `(x, t)`, `source` nodes
    /// get `(s, y)`.
    Witnesses {
        sink: Vec<NodeId>,
        source: Vec<NodeId>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub mask: RegionMask,
    /// `M`; defaults to `n^4`.
    pub big_capacity: Option<u64>,
    pub attachment: Attachment,
}

impl GridSpec {
    pub fn new(mask: RegionMask, attachment: Attachment) -> Self {
        GridSpec {
            mask,
            big_capacity: None,
            attachment,
        }
    }

    pub fn side(&self) -> usize {
        self.mask.side
    }

    pub fn big_capacity(&self) -> u64 {
        self.big_capacity
            .unwrap_or_else(|| (self.side() as u64).pow(4).max(2))
    }

    pub fn source(&self) -> NodeId {
        self.side() * self.side()
    }

    pub fn sink(&self) -> NodeId {
        self.source() + 1
    }

    /// Nodes attached to the sink and from the source, ascending.
    pub fn terminal_nodes(&self) -> (Vec<NodeId>, Vec<NodeId>) {
        match &self.attachment {
            Attachment::Dense => {
                let cells = self.mask.cells();
                let sink = (0..cells.len()).filter(|&v| cells[v]).collect();
                let source = (0..cells.len()).filter(|&v| !cells[v]).collect();
                (sink, source)
            }
            Attachment::Witnesses { sink, source } => {
                let mut sink = sink.clone();
                let mut source = source.clone();
                sink.sort_unstable();
                sink.dedup();
                source.sort_unstable();
                source.dedup();
                (sink, source)
            }
        }
    }
}

/// Builds the separable grid network of `spec`.
///
/// Nodes `0..n^2` are grid cells in row-major order, then `s`, then `t`.
/// Grid edges come first, per cell: right pair (out, back), then down pair
/// (out, back); then `s -> y` edges, then `x -> t` edges, each ascending.
pub fn make_separable_grid(spec: &GridSpec) -> Result<FlowNetwork, GridError> {
    let n = spec.side();
    if n == 0 {
        return Err(GridError::EmptyGrid);
    }
    let cells = spec.mask.cells();
    let (sink_nodes, source_nodes) = spec.terminal_nodes();
    for &x in &sink_nodes {
        match cells.get(x) {
            None => return Err(GridError::NodeOutOfGrid { node: x, side: n }),
            Some(false) => return Err(GridError::SinkWitnessOutside(x)),
            Some(true) => {}
        }
    }
    for &y in &source_nodes {
        match cells.get(y) {
            None => return Err(GridError::NodeOutOfGrid { node: y, side: n }),
            Some(true) => return Err(GridError::SourceWitnessInside(y)),
            Some(false) => {}
        }
    }
    if sink_nodes.is_empty() {
        return Err(GridError::NoSinkWitness);
    }
    if source_nodes.is_empty() {
        return Err(GridError::NoSourceWitness);
    }

    let big = spec.big_capacity();
    let (s, t) = (spec.source(), spec.sink());
    let mut edges = Vec::with_capacity(4 * n * n + sink_nodes.len() + source_nodes.len());
    for (u, v) in spec.mask.neighbour_pairs() {
        let cap = if cells[u] != cells[v] { 1 } else { big };
        edges.push(Edge::new(u, v, cap));
        edges.push(Edge::new(v, u, cap));
    }
    edges.extend(source_nodes.iter().map(|&y| Edge::new(s, y, big)));
    edges.extend(sink_nodes.iter().map(|&x| Edge::new(x, t, big)));
    Ok(FlowNetwork::new(n * n + 2, s, t, edges).expect("grid construction is valid"))
}

/// A region edit applied by [`d_local_shift`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaskEdit {
    /// Moves the region by `(rows, cols)`; cells leaving the grid are lost.
    Translate { rows: i64, cols: i64 },
    /// Flips membership of the listed `(row, col)` cells.
    Toggle(Vec<(usize, usize)>),
    /// Adds every outside cell with a 4-neighbour in the region.
    Grow,
}

/// Grid cells whose membership differs between the masks.
pub fn changed_cells(before: &RegionMask, after: &RegionMask) -> Vec<(usize, usize)> {
    assert_eq!(before.side, after.side, "masks of different grids");
    (0..before.inside.len())
        .filter(|&v| before.inside[v] != after.inside[v])
        .map(|v| before.position(v))
        .collect()
}

/// Largest grid distance between two changed cells, 0 when fewer than two
/// cells changed.
///
/// Shortest paths in a full grid are Manhattan distances, and the largest
/// Manhattan distance in a point set is the larger spread of `r + c` and
/// `r - c`.
pub fn transition_locality(before: &RegionMask, after: &RegionMask) -> usize {
    let changed = changed_cells(before, after);
    if changed.len() < 2 {
        return 0;
    }
    let sums = changed.iter().map(|&(r, c)| (r + c) as i64);
    let diffs = changed.iter().map(|&(r, c)| r as i64 - c as i64);
    let spread = |it: &mut dyn Iterator<Item = i64>| {
        let (lo, hi) = it.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
        (hi - lo) as usize
    };
    spread(&mut sums.into_iter()).max(spread(&mut diffs.into_iter()))
}

/// Applies `edit` and reports the locality `d` of the transition.
pub fn d_local_shift(mask: &RegionMask, edit: &MaskEdit) -> (RegionMask, usize) {
    let n = mask.side;
    let mut next = RegionMask::empty(n);
    match edit {
        MaskEdit::Translate { rows, cols } => {
            for r in 0..n {
                for c in 0..n {
                    if !mask.contains(r, c) {
                        continue;
                    }
                    let (nr, nc) = (r as i64 + rows, c as i64 + cols);
                    if (0..n as i64).contains(&nr) && (0..n as i64).contains(&nc) {
                        next.set(nr as usize, nc as usize, true);
                    }
                }
            }
        }
        MaskEdit::Toggle(cells) => {
            next = mask.clone();
            for &(r, c) in cells {
                if r < n && c < n {
                    let v = next.node(r, c);
                    next.inside[v] = !next.inside[v];
                }
            }
        }
        MaskEdit::Grow => {
            next = mask.clone();
            for (u, v) in mask.neighbour_pairs() {
                if mask.inside[u] != mask.inside[v] {
                    next.inside[u] = true;
                    next.inside[v] = true;
                }
            }
        }
    }
    let d = transition_locality(mask, &next);
    (next, d)
}

pub fn verify_d_local(before: &RegionMask, after: &RegionMask, d: usize) -> bool {
    transition_locality(before, after) <= d
}

/// A pair of region masks and the locality radius claimed for them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSpec {
    pub before: RegionMask,
    pub after: RegionMask,
    pub d: usize,
}

impl TransitionSpec {
    pub fn is_d_local(&self) -> bool {
        verify_d_local(&self.before, &self.after, self.d)
    }
}

/// A sequence of separable grids with d-local transitions.
///
/// The region is a centred square of side `n/2` with a 2x2 bump on its top
/// edge. Each frame slides the bump one column, bouncing at the square's
/// corners, which changes four cells at pairwise distance at most 3. The
/// sink witness is the square's centre and the source witness the grid
/// corner `(0, 0)`, so every frame shares one edge list.
pub fn sliding_bump_sequence(side: usize, frames: usize) -> Vec<GridSpec> {
    assert!(side >= 8, "sliding bump needs a grid side of at least 8");
    let square = side / 2;
    let top = side / 4;
    let left = side / 4;
    let centre = (top + square / 2) * side + left + square / 2;
    let attachment = Attachment::Witnesses {
        sink: vec![centre],
        source: vec![0],
    };

    let max_offset = square - 2;
    let mut offset = 0usize;
    let mut step: i64 = 1;
    let mut specs = Vec::with_capacity(frames);
    for _ in 0..frames {
        let mut mask = RegionMask::rectangle(side, top, left, square, square);
        for r in top - 2..top {
            for c in left + offset..left + offset + 2 {
                mask.set(r, c, true);
            }
        }
        specs.push(GridSpec::new(mask, attachment.clone()));

        if max_offset == 0 {
            continue;
        }
        if (offset == max_offset && step > 0) || (offset == 0 && step < 0) {
            step = -step;
        }
        offset = (offset as i64 + step) as usize;
    }
    specs
}
