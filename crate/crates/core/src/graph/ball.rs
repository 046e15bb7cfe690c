use std::collections::{HashMap, VecDeque};
use std::io::Write;

use super::{GraphOracle, VertexKey};
use crate::error::{Error, Result};

/// Default cap on the number of vertices a single materialization may create.
pub const DEFAULT_BUDGET: usize = 200_000;

/// Materialized finite graph with stable vertex indexing and boundary marks.
///
/// Balls put the center at index 0 and list vertices in BFS order.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGraph {
    verts: Vec<VertexKey>,
    index: HashMap<VertexKey, usize>,
    adj: Vec<Vec<usize>>,
    boundary: Vec<bool>,
    depth: Vec<usize>,
    radius: usize,
    oracle_id: String,
}

impl FiniteGraph {
    /// Builds a graph on `0..n` from an edge list. Vertex keys are `Int([i])`;
    /// depth is the BFS distance from vertex 0 (`usize::MAX` if unreachable).
    pub fn from_edges(n: usize, edges: &[(usize, usize)], boundary: Vec<bool>) -> Result<Self> {
        if boundary.len() != n {
            return Err(Error::IndexMismatch {
                expected: n,
                actual: boundary.len(),
            });
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let verts: Vec<VertexKey> = (0..n as i64).map(VertexKey::int).collect();
        let index = verts.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let depth = bfs_depths(&adj, 0);
        let radius = depth.iter().copied().filter(|&d| d != usize::MAX).max().unwrap_or(0);
        Ok(FiniteGraph {
            verts,
            index,
            adj,
            boundary,
            depth,
            radius,
            oracle_id: "edge-list".into(),
        })
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn verts(&self) -> &[VertexKey] {
        &self.verts
    }

    pub fn key(&self, i: usize) -> &VertexKey {
        &self.verts[i]
    }

    pub fn index_of(&self, v: &VertexKey) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    /// Distance from vertex 0 within the ball.
    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn oracle_id(&self) -> &str {
        &self.oracle_id
    }

    pub fn boundary_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.boundary[i])
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.boundary[i])
    }

    /// Unordered edges `(i, j)` with `i < j`, ordered by `i` then `j`. This is
    /// the enumeration that indexes [`crate::potential::EdgeFunction`].
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    /// Same vertices, boundary and indexing, with the adjacency replaced by
    /// the edges `oracle` induces on the vertex set.
    pub fn induced_by(&self, oracle: &dyn GraphOracle) -> FiniteGraph {
        let adj = induced_adjacency(&self.verts, &self.index, oracle);
        FiniteGraph {
            adj,
            oracle_id: oracle.name(),
            ..self.clone()
        }
    }

    /// Same graph with a different edge set on the same vertices.
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Result<FiniteGraph> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(u, v) in edges {
            if u >= self.len() || v >= self.len() || u == v {
                return Err(Error::InvalidParameter(format!("bad edge ({u},{v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(FiniteGraph { adj, ..self.clone() })
    }

    /// Same graph with extra vertices flagged as boundary (fixed) vertices.
    pub fn with_extra_boundary(&self, extra: impl IntoIterator<Item = usize>) -> FiniteGraph {
        let mut g = self.clone();
        for i in extra {
            g.boundary[i] = true;
        }
        g
    }

    /// Shortest-path distances from `src` within this graph.
    pub fn distances_from(&self, src: usize) -> Vec<usize> {
        bfs_depths(&self.adj, src)
    }

    /// Writes the edge list (`u v` per line) followed by nothing else.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    /// Writes the vertex table: `index<TAB>key<TAB>boundary-flag`.
    pub fn write_vertex_table<W: Write>(&self, mut out: W) -> Result<()> {
        for (i, k) in self.verts.iter().enumerate() {
            writeln!(out, "{i}\t{k}\t{}", u8::from(self.boundary[i]))?;
        }
        Ok(())
    }

    /// Parses an edge list written by [`FiniteGraph::write_edge_list`]; the
    /// vertex count is one past the largest index. No boundary is flagged.
    pub fn read_edge_list(text: &str) -> Result<FiniteGraph> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace().map(str::parse::<usize>);
            match (parts.next(), parts.next(), parts.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => {
                    n = n.max(u + 1).max(v + 1);
                    edges.push((u, v));
                }
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "edge list line {}: expected `u v`",
                        lineno + 1
                    )))
                }
            }
        }
        FiniteGraph::from_edges(n, &edges, vec![false; n])
    }
}

fn bfs_depths(adj: &[Vec<usize>], src: usize) -> Vec<usize> {
    let mut depth = vec![usize::MAX; adj.len()];
    if adj.is_empty() {
        return depth;
    }
    let mut queue = VecDeque::new();
    depth[src] = 0;
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                queue.push_back(w);
            }
        }
    }
    depth
}

fn induced_adjacency(
    verts: &[VertexKey],
    index: &HashMap<VertexKey, usize>,
    oracle: &dyn GraphOracle,
) -> Vec<Vec<usize>> {
    verts
        .iter()
        .map(|v| {
            let mut list: Vec<usize> = oracle
                .neighbors(v)
                .iter()
                .filter_map(|w| index.get(w).copied())
                .collect();
            list.sort_unstable();
            list
        })
        .collect()
}

/// Materializes the ball of radius `radius` around `center`.
///
/// A vertex is flagged boundary when it sits at distance exactly `radius`
/// or has an oracle-neighbor outside the ball.
pub fn ball(g: &dyn GraphOracle, center: &VertexKey, radius: usize, budget: usize) -> Result<FiniteGraph> {
    if !g.contains(center) {
        return Err(Error::UnknownVertex(center.clone(), g.name()));
    }
    let mut verts = vec![center.clone()];
    let mut index = HashMap::new();
    let mut depth = vec![0usize];
    let mut nbr_cache: Vec<Vec<VertexKey>> = Vec::new();
    index.insert(center.clone(), 0usize);
    let mut head = 0;
    while head < verts.len() {
        let nbrs = g.neighbors(&verts[head]);
        let d = depth[head];
        if d < radius {
            for w in &nbrs {
                if !index.contains_key(w) {
                    if verts.len() >= budget {
                        return Err(Error::BudgetExceeded {
                            limit: budget,
                            reached: verts.len(),
                        });
                    }
                    index.insert(w.clone(), verts.len());
                    verts.push(w.clone());
                    depth.push(d + 1);
                }
            }
        }
        nbr_cache.push(nbrs);
        head += 1;
    }
    let mut adj = Vec::with_capacity(verts.len());
    let mut boundary = Vec::with_capacity(verts.len());
    for (i, nbrs) in nbr_cache.iter().enumerate() {
        let mut list: Vec<usize> = nbrs.iter().filter_map(|w| index.get(w).copied()).collect();
        list.sort_unstable();
        boundary.push(depth[i] == radius || list.len() < nbrs.len());
        adj.push(list);
    }
    Ok(FiniteGraph {
        verts,
        index,
        adj,
        boundary,
        depth,
        radius,
        oracle_id: g.name(),
    })
}

/// Finite-scale proxy for the number of ends: the number of connected
/// components of `B_R \ B_r` that reach the sphere of radius `R`.
///
/// This is a heuristic; for the shipped families it stabilizes to the end
/// count as `r` and `R` grow, and a value above 2 flags many ends.
pub fn end_estimate(g: &dyn GraphOracle, inner: usize, outer: usize, budget: usize) -> Result<usize> {
    if inner >= outer {
        return Err(Error::InvalidParameter(format!("need r < R, got r={inner}, R={outer}")));
    }
    let b = ball(g, &g.origin(), outer, budget)?;
    let mut comp = vec![usize::MAX; b.len()];
    let mut count = 0;
    for s in 0..b.len() {
        if b.depth(s) <= inner || comp[s] != usize::MAX {
            continue;
        }
        let mut reaches_sphere = false;
        let mut stack = vec![s];
        comp[s] = s;
        while let Some(u) = stack.pop() {
            reaches_sphere |= b.depth(u) == outer;
            for &w in b.neighbors(u) {
                if b.depth(w) > inner && comp[w] == usize::MAX {
                    comp[w] = s;
                    stack.push(w);
                }
            }
        }
        if reaches_sphere {
            count += 1;
        }
    }
    Ok(count)
}
