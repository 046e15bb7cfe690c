//! Finite-scale probes: annulus capacity and oscillation of two-valued
//! harmonic extensions.

use super::dirichlet::{solve_dirichlet, DirichletProblem, DirichletSolution, DEFAULT_MAX_ITERS, DEFAULT_TOLERANCE};
use super::split::SplitRule;
use crate::error::{Error, Result};
use crate::graph::{ball, FiniteGraph, GraphOracle, VertexKey, DEFAULT_BUDGET};

/// Solver and materialization settings shared by the probes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeOptions {
    pub tolerance: f64,
    pub max_iters: usize,
    pub budget: usize,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            tolerance: DEFAULT_TOLERANCE,
            max_iters: DEFAULT_MAX_ITERS,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// The capacity problem on `B_R`: value 1 on `B_r`, value 0 on the
/// boundary of `B_R`.
pub fn capacity_problem(
    g: &dyn GraphOracle,
    center: &VertexKey,
    inner: usize,
    outer: usize,
    p: f64,
    opts: &ProbeOptions,
) -> Result<DirichletProblem> {
    if inner == 0 || inner >= outer {
        return Err(Error::InvalidParameter(format!(
            "need 0 < r < R, got r={inner}, R={outer}"
        )));
    }
    let b = ball(g, center, outer, opts.budget)?;
    let inside: Vec<usize> = (0..b.len()).filter(|&i| b.depth(i) <= inner).collect();
    let fixed = b.with_extra_boundary(inside);
    let prob = DirichletProblem::from_labels(fixed, p, |i| if b.depth(i) <= inner { 1.0 } else { 0.0 })?;
    Ok(prob.with_tolerance(opts.tolerance).with_max_iters(opts.max_iters))
}

/// p-energy of the capacity potential of the annulus `B_R \ B_r`.
pub fn annulus_capacity(
    g: &dyn GraphOracle,
    center: &VertexKey,
    inner: usize,
    outer: usize,
    p: f64,
    opts: &ProbeOptions,
) -> Result<f64> {
    let prob = capacity_problem(g, center, inner, outer, p, opts)?;
    Ok(solve_dirichlet(&prob)?.energy)
}

/// Result of [`oscillation_probe`].
#[derive(Clone, Debug)]
pub struct OscillationProbe {
    /// `max - min` of the solution over `B_{R/2}`.
    pub interior_oscillation: f64,
    pub energy: f64,
    pub graph: FiniteGraph,
    pub solution: DirichletSolution,
}

/// Solves the Dirichlet problem on `B_R` with boundary data from `split`
/// and measures the oscillation over the inner half-ball `B_{R/2}`.
pub fn oscillation_probe(
    g: &dyn GraphOracle,
    center: &VertexKey,
    radius: usize,
    p: f64,
    split: &dyn SplitRule,
    opts: &ProbeOptions,
) -> Result<OscillationProbe> {
    let b = ball(g, center, radius, opts.budget)?;
    let mut values = std::collections::BTreeMap::new();
    for i in b.boundary_vertices() {
        values.insert(i, split.label(&b, i)?);
    }
    let prob = DirichletProblem::new(b, values, p)?
        .with_tolerance(opts.tolerance)
        .with_max_iters(opts.max_iters);
    let solution = solve_dirichlet(&prob)?;
    let b = prob.graph();
    let half = radius / 2;
    let (lo, hi) = (0..b.len())
        .filter(|&i| b.depth(i) <= half)
        .map(|i| solution.function.values()[i])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    Ok(OscillationProbe {
        interior_oscillation: hi - lo,
        energy: solution.energy,
        graph: b.clone(),
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{free_group_graph, grid_graph, line_graph};
    use crate::potential::split::{BaseSign, FirstLetter};

    #[test]
    fn line_capacity_closed_form() {
        let o = ProbeOptions::default();
        let c = annulus_capacity(line_graph().as_ref(), &VertexKey::int(0), 1, 10, 2.0, &o).unwrap();
        assert!((c - 2.0 / 9.0).abs() < 1e-10);
        // p-capacity of the line: each side carries (R-r) edges of slope 1/(R-r)
        let c3 = annulus_capacity(line_graph().as_ref(), &VertexKey::int(0), 1, 10, 3.0, &o).unwrap();
        assert!((c3 - 2.0 * 9.0 * (1.0f64 / 9.0).powi(3)).abs() < 1e-10);
    }

    #[test]
    fn capacity_with_no_free_vertices_is_step_energy() {
        let g = grid_graph(2).unwrap();
        let o = ProbeOptions::default();
        let c = annulus_capacity(g.as_ref(), &g.origin(), 2, 3, 2.0, &o).unwrap();
        // edges from the sphere of radius 2 (8 vertices) to radius 3: 4*2*... count directly
        let b = ball(g.as_ref(), &g.origin(), 3, o.budget).unwrap();
        let cut = b
            .edges()
            .iter()
            .filter(|&&(i, j)| (b.depth(i) <= 2) != (b.depth(j) <= 2))
            .count();
        assert_eq!(c, cut as f64);
    }

    #[test]
    fn capacity_rejects_bad_radii() {
        let o = ProbeOptions::default();
        assert!(annulus_capacity(line_graph().as_ref(), &VertexKey::int(0), 0, 3, 2.0, &o).is_err());
        assert!(annulus_capacity(line_graph().as_ref(), &VertexKey::int(0), 3, 3, 2.0, &o).is_err());
    }

    #[test]
    fn line_oscillation() {
        let o = ProbeOptions::default();
        let r = oscillation_probe(line_graph().as_ref(), &VertexKey::int(0), 10, 2.0, &BaseSign, &o).unwrap();
        assert!((r.interior_oscillation - 0.5).abs() < 1e-9);
        assert!((r.energy - 1.0 / 20.0).abs() < 1e-10);
    }

    #[test]
    fn free_group_center_is_half() {
        let g = free_group_graph(2).unwrap();
        let o = ProbeOptions::default();
        let r = oscillation_probe(g.as_ref(), &g.origin(), 4, 2.0, &FirstLetter, &o).unwrap();
        assert!((r.solution.function.values()[0] - 0.5).abs() < 1e-9);
        assert!(r.interior_oscillation > 0.2);
    }
}
