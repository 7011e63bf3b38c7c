use std::ops::AddAssign;

use serde::Serialize;

/// Counters for the paths found by a search-based solver phase.
///
/// `node_expansions` is the number of nodes removed from a search frontier
/// (queue pops for BFS, node entries for the blocking-flow DFS), summed over
/// every search the phase ran, including the final unsuccessful one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PathStats {
    pub path_count: u64,
    pub total_length: u64,
    pub max_length: u64,
    pub node_expansions: u64,
}

impl PathStats {
    pub fn record_path(&mut self, length: usize) {
        let length = length as u64;
        self.path_count += 1;
        self.total_length += length;
        self.max_length = self.max_length.max(length);
    }

    /// Mean path length, or 0 when no path was recorded.
    pub fn mean_length(&self) -> f64 {
        if self.path_count == 0 {
            0.0
        } else {
            self.total_length as f64 / self.path_count as f64
        }
    }
}

impl AddAssign for PathStats {
    fn add_assign(&mut self, rhs: Self) {
        self.path_count += rhs.path_count;
        self.total_length += rhs.total_length;
        self.max_length = self.max_length.max(rhs.max_length);
        self.node_expansions += rhs.node_expansions;
    }
}
