//! Line augmentation `H -> H'` and the `(4k+1)` gradient-norm check.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use super::line::{check_line_window, LineShape, SpanningLine};
use crate::error::{Error, Result};
use crate::graph::normalize;
use crate::graph::{FiniteGraph, GraphOracle, Oracle, VertexKey};
use crate::potential::{p_energy, VertexFunction};

/// Vertices checked around the origin before accepting an infinite line.
const VALIDATION_WINDOW: usize = 64;

/// `H` plus the consecutive-pair edges of a spanning line.
#[derive(Debug, Clone)]
pub struct AugmentedOracle {
    base: Oracle,
    line: SpanningLine,
}

impl AugmentedOracle {
    pub fn base(&self) -> &Oracle {
        &self.base
    }

    pub fn line(&self) -> &SpanningLine {
        &self.line
    }
}

impl GraphOracle for AugmentedOracle {
    fn neighbors(&self, v: &VertexKey) -> Vec<VertexKey> {
        let mut nbrs = self.base.neighbors(v);
        nbrs.extend(self.line.line_neighbors(v));
        normalize(v, nbrs)
    }

    fn origin(&self) -> VertexKey {
        self.base.origin()
    }

    fn degree_bound(&self) -> Option<usize> {
        self.base.degree_bound().map(|d| d + 2)
    }

    fn contains(&self, v: &VertexKey) -> bool {
        self.base.contains(v)
    }

    fn name(&self) -> String {
        format!("augment({},k={})", self.base.name(), self.line.k())
    }
}

/// Adds the line's consecutive pairs to `h` as edges. The line is
/// re-verified against `h` (whole order when finite, a window around the
/// origin when infinite).
pub fn augment_with_line(h: Oracle, line: SpanningLine) -> Result<Oracle> {
    let region: Vec<VertexKey> = match line.shape() {
        LineShape::Path(order) | LineShape::Cycle(order) => order.clone(),
        LineShape::Infinite(rule) => {
            let at = rule
                .position(&h.origin())
                .ok_or_else(|| Error::InvalidLine(format!("line misses the origin {}", h.origin())))?;
            line.window(at - VALIDATION_WINDOW as i64 / 2, VALIDATION_WINDOW)
        }
    };
    if let Some(v) = region.iter().find(|v| !h.contains(v)) {
        return Err(Error::InvalidLine(format!("{v} is not a vertex of {}", h.name())));
    }
    check_line_window(h.as_ref(), &line, &region).map_err(|e| Error::InvalidLine(format!("{e:?}")))?;
    if let LineShape::Cycle(order) = line.shape() {
        let (a, b) = (&order[0], &order[order.len() - 1]);
        if order.len() > 2 && crate::graph::bounded_distance(h.as_ref(), a, b, line.k()).is_none() {
            return Err(Error::InvalidLine(format!("closing hop {b} -> {a} exceeds k")));
        }
    }
    Ok(Arc::new(AugmentedOracle { base: h, line }))
}

fn within(adj: &FiniteGraph, src: usize, dst: usize, k: usize) -> Option<usize> {
    let mut depth = vec![usize::MAX; adj.len()];
    depth[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        if u == dst {
            return Some(depth[u]);
        }
        if depth[u] == k {
            continue;
        }
        for &w in adj.neighbors(u) {
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                queue.push_back(w);
            }
        }
    }
    None
}

/// The augmented graph on the vertex set of `g`: edges of `aug` between
/// vertices of `g`, minus added edges whose endpoints are farther than `k`
/// apart inside `g` (those only close up through the outside of the ball).
pub fn augmented_ball(g: &FiniteGraph, aug: &dyn GraphOracle, k: usize) -> Result<FiniteGraph> {
    let induced = g.induced_by(aug);
    let keep: Vec<(usize, usize)> = induced
        .edges()
        .into_iter()
        .filter(|&(u, v)| g.has_edge(u, v) || within(g, u, v, k).is_some())
        .collect();
    // keep all of g's edges even if `aug` somehow lost one
    let mut all = keep;
    all.extend(g.edges());
    induced.with_edges(&all)
}

/// Structural preconditions of the gradient bound.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AugmentationReport {
    pub vertices: usize,
    pub added_edges: usize,
    pub max_added_per_vertex: usize,
    /// Largest in-`g` distance spanned by an added edge.
    pub max_span: usize,
    pub missing_base_edges: usize,
    pub ok: bool,
}

/// Precomputes the structural report for a `(g, g_aug)` pair so many
/// functions can be checked cheaply.
#[derive(Clone, Debug)]
pub struct GradientBoundHarness<'a> {
    g: &'a FiniteGraph,
    g_aug: &'a FiniteGraph,
    k: usize,
    report: AugmentationReport,
}

impl<'a> GradientBoundHarness<'a> {
    pub fn new(g: &'a FiniteGraph, g_aug: &'a FiniteGraph, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        if g.len() != g_aug.len() {
            return Err(Error::IndexMismatch {
                expected: g.len(),
                actual: g_aug.len(),
            });
        }
        if let Some(i) = (0..g.len()).find(|&i| g.key(i) != g_aug.key(i)) {
            return Err(Error::InvalidParameter(format!(
                "vertex {i} differs: {} vs {}",
                g.key(i),
                g_aug.key(i)
            )));
        }
        let missing_base_edges = g.edges().iter().filter(|&&(u, v)| !g_aug.has_edge(u, v)).count();
        let mut added_at = vec![0usize; g.len()];
        let mut added_edges = 0;
        let mut max_span = 0;
        for (u, v) in g_aug.edges() {
            if g.has_edge(u, v) {
                continue;
            }
            added_edges += 1;
            added_at[u] += 1;
            added_at[v] += 1;
            // distances beyond k + 1 are not interesting; record k + 1 as "too far"
            let span = within(g, u, v, k).unwrap_or(k + 1);
            max_span = max_span.max(span);
        }
        let max_added_per_vertex = added_at.iter().copied().max().unwrap_or(0);
        let report = AugmentationReport {
            vertices: g.len(),
            added_edges,
            max_added_per_vertex,
            max_span,
            missing_base_edges,
            ok: missing_base_edges == 0 && max_added_per_vertex <= 4 && max_span <= k,
        };
        Ok(GradientBoundHarness { g, g_aug, k, report })
    }

    pub fn report(&self) -> &AugmentationReport {
        &self.report
    }

    pub fn check(&self, f: &VertexFunction, p: f64) -> Result<GradientBound> {
        if f.len() != self.g.len() {
            return Err(Error::IndexMismatch {
                expected: self.g.len(),
                actual: f.len(),
            });
        }
        let lhs = p_energy(f, self.g_aug, p)?.powf(1.0 / p);
        let base = p_energy(f, self.g, p)?.powf(1.0 / p);
        let rhs = (4 * self.k + 1) as f64 * base;
        // relative slack for rounding only; the inequality itself is not relaxed
        let ok = lhs <= rhs * (1.0 + 1e-12) + f64::MIN_POSITIVE;
        Ok(GradientBound {
            lhs,
            rhs,
            ok,
            structural_ok: self.report.ok,
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct GradientBound {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
    /// Whether the augmentation met the preconditions; when false the
    /// bound is not guaranteed and `ok` is informational.
    pub structural_ok: bool,
}

/// `‖∇f‖_{p,g_aug} ≤ (4k+1)‖∇f‖_{p,g}` for one function.
pub fn verify_gradient_bound(
    g: &FiniteGraph,
    g_aug: &FiniteGraph,
    f: &VertexFunction,
    p: f64,
    k: usize,
) -> Result<GradientBound> {
    GradientBoundHarness::new(g, g_aug, k)?.check(f, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ball, caterpillar_graph, check_oracle, line_graph, GraphDescriptor};
    use crate::spanning::builtin_spanning_line;

    #[test]
    fn identity_line_adds_nothing() {
        let h = line_graph();
        let line = builtin_spanning_line(&GraphDescriptor::Line).unwrap();
        let aug = augment_with_line(h.clone(), line).unwrap();
        for n in -5..5 {
            let v = VertexKey::int(n);
            assert_eq!(aug.neighbors(&v), h.neighbors(&v));
        }
    }

    #[test]
    fn caterpillar_gains_at_most_two() {
        let h = caterpillar_graph(1).unwrap();
        let line = builtin_spanning_line(&GraphDescriptor::Caterpillar { leaves: 1 }).unwrap();
        let aug = augment_with_line(h.clone(), line).unwrap();
        assert!(check_oracle(aug.as_ref(), 4).is_empty());
        for i in -4..4 {
            for j in 0..2 {
                let v = VertexKey::point(&[i, j]);
                assert!(aug.degree(&v) <= h.degree(&v) + 2);
            }
        }
        // leaf (0,1) now reaches spine (1,0)
        assert!(aug
            .neighbors(&VertexKey::point(&[0, 1]))
            .contains(&VertexKey::point(&[1, 0])));
    }

    #[test]
    fn invalid_line_is_rejected() {
        let h = line_graph();
        let cat = builtin_spanning_line(&GraphDescriptor::Caterpillar { leaves: 1 }).unwrap();
        assert!(augment_with_line(h, cat).is_err());
    }

    #[test]
    fn bound_on_caterpillar_ball() {
        let h = caterpillar_graph(1).unwrap();
        let line = builtin_spanning_line(&GraphDescriptor::Caterpillar { leaves: 1 }).unwrap();
        let k = line.k();
        let aug = augment_with_line(h.clone(), line).unwrap();
        let g = ball(h.as_ref(), &h.origin(), 6, 10_000).unwrap();
        let ga = augmented_ball(&g, aug.as_ref(), k).unwrap();
        let harness = GradientBoundHarness::new(&g, &ga, k).unwrap();
        assert!(harness.report().ok, "{:?}", harness.report());
        assert!(harness.report().added_edges > 0);
        let f = VertexFunction::on(&g, (0..g.len()).map(|i| (i as f64 * 0.7).sin()).collect()).unwrap();
        let r = harness.check(&f, 2.0).unwrap();
        assert!(r.ok && r.lhs > 0.0);
        let c = harness.check(&VertexFunction::constant(&g, 3.0), 1.5).unwrap();
        assert_eq!((c.lhs, c.rhs, c.ok), (0.0, 0.0, true));
    }

    #[test]
    fn mismatched_indexing_is_an_error() {
        let h = line_graph();
        let a = ball(h.as_ref(), &h.origin(), 2, 100).unwrap();
        let b = ball(h.as_ref(), &h.origin(), 3, 100).unwrap();
        assert!(matches!(
            GradientBoundHarness::new(&a, &b, 1),
            Err(Error::IndexMismatch { .. })
        ));
    }
}
