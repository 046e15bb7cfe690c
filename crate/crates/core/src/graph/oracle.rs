use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::VertexKey;

/// Neighbor-function view of a locally finite graph, finite or infinite.
///
/// Implementations must return sorted, duplicate-free neighbor lists without
/// the query vertex itself, and adjacency must be symmetric.
pub trait GraphOracle: Send + Sync + fmt::Debug {
    /// Neighbors of `v`. Behavior is unspecified when `!self.contains(v)`.
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey>;

    /// Distinguished base vertex.
    fn origin(&self) -> VertexKey;

    /// Upper bound on all degrees, when one exists.
    fn degree_bound(&self) -> Option<usize>;

    /// Whether `v` is a well-formed vertex of this graph.
    fn contains(&self, v: &VertexKey) -> bool;

    /// Short provenance tag, e.g. `lamplighter(path(2),line)`.
    fn name(&self) -> String;

    fn degree(&self, v: &VertexKey) -> usize {
        self.neighbors(v).len()
    }
}

/// Shared handle to an oracle; oracles are immutable and thread-safe.
pub type Oracle = Arc<dyn GraphOracle>;

/// Vertices within graph distance `radius` of `center`, in BFS order, with
/// their distances. No budget; callers keep `radius` small.
pub fn bfs_layers(g: &dyn GraphOracle, center: &VertexKey, radius: usize) -> Vec<(VertexKey, usize)> {
    let mut seen: HashSet<VertexKey> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(center.clone());
    queue.push_back((center.clone(), 0));
    while let Some((v, d)) = queue.pop_front() {
        if d < radius {
            for w in g.neighbors(&v) {
                if seen.insert(w.clone()) {
                    queue.push_back((w, d + 1));
                }
            }
        }
        out.push((v, d));
    }
    out
}

/// Graph distance between `a` and `b` if it is at most `limit`.
pub fn bounded_distance(g: &dyn GraphOracle, a: &VertexKey, b: &VertexKey, limit: usize) -> Option<usize> {
    if a == b {
        return Some(0);
    }
    let mut seen: HashSet<VertexKey> = HashSet::new();
    let mut frontier = vec![a.clone()];
    seen.insert(a.clone());
    for d in 1..=limit {
        let mut next = Vec::new();
        for v in &frontier {
            for w in g.neighbors(v) {
                if &w == b {
                    return Some(d);
                }
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    None
}

/// A symmetry, loop or ordering defect found by [`check_oracle`].
#[derive(Clone, Debug, PartialEq)]
pub enum OracleDefect {
    Asymmetric { from: VertexKey, to: VertexKey },
    SelfLoop(VertexKey),
    Unsorted(VertexKey),
    DegreeAboveBound { vertex: VertexKey, degree: usize },
}

/// Verifies the oracle invariants on every vertex of the ball of the given
/// radius around the origin.
pub fn check_oracle(g: &dyn GraphOracle, radius: usize) -> Vec<OracleDefect> {
    let mut defects = Vec::new();
    for (v, _) in bfs_layers(g, &g.origin(), radius) {
        let nbrs = g.neighbors(&v);
        if nbrs.windows(2).any(|p| p[0] >= p[1]) {
            defects.push(OracleDefect::Unsorted(v.clone()));
        }
        if let Some(bound) = g.degree_bound() {
            if nbrs.len() > bound {
                defects.push(OracleDefect::DegreeAboveBound {
                    vertex: v.clone(),
                    degree: nbrs.len(),
                });
            }
        }
        for w in &nbrs {
            if *w == v {
                defects.push(OracleDefect::SelfLoop(v.clone()));
            } else if g.neighbors(w).binary_search(&v).is_err() {
                defects.push(OracleDefect::Asymmetric {
                    from: v.clone(),
                    to: w.clone(),
                });
            }
        }
    }
    defects
}

/// Sorts and deduplicates a neighbor list and removes `v` itself.
pub(crate) fn normalize(v: &VertexKey, mut nbrs: Vec<VertexKey>) -> Vec<VertexKey> {
    nbrs.sort();
    nbrs.dedup();
    nbrs.retain(|w| w != v);
    nbrs
}
