use std::collections::{BTreeMap, VecDeque};

use super::function::{energy_of, VertexFunction};
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERS: usize = 1_000_000;

/// Minimize the p-energy on `graph` subject to fixed values on every
/// boundary-flagged vertex.
#[derive(Clone, Debug)]
pub struct DirichletProblem {
    graph: FiniteGraph,
    boundary_values: BTreeMap<usize, f64>,
    p: f64,
    tolerance: f64,
    max_iters: usize,
}

impl DirichletProblem {
    /// Validates that `boundary_values` covers exactly the boundary vertices.
    pub fn new(graph: FiniteGraph, boundary_values: BTreeMap<usize, f64>, p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidProblem(format!("p must lie in (1, inf), got {p}")));
        }
        for (&i, v) in &boundary_values {
            if i >= graph.len() || !graph.is_boundary(i) {
                return Err(Error::InvalidProblem(format!("vertex {i} is not a boundary vertex")));
            }
            if !v.is_finite() {
                return Err(Error::InvalidProblem(format!("non-finite boundary value at {i}")));
            }
        }
        if let Some(i) = graph.boundary_vertices().find(|i| !boundary_values.contains_key(i)) {
            return Err(Error::InvalidProblem(format!("missing boundary value for vertex {i}")));
        }
        Ok(DirichletProblem {
            graph,
            boundary_values,
            p,
            tolerance: DEFAULT_TOLERANCE,
            max_iters: DEFAULT_MAX_ITERS,
        })
    }

    /// Boundary data from a labeling function evaluated on each boundary vertex.
    pub fn from_labels(graph: FiniteGraph, p: f64, label: impl Fn(usize) -> f64) -> Result<Self> {
        let values = graph.boundary_vertices().map(|i| (i, label(i))).collect();
        DirichletProblem::new(graph, values, p)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn boundary_values(&self) -> &BTreeMap<usize, f64> {
        &self.boundary_values
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }
}

/// Solver output with its diagnostics.
#[derive(Clone, Debug)]
pub struct DirichletSolution {
    pub function: VertexFunction,
    /// Largest p-Laplacian residual over interior vertices, normalized by
    /// degree; for `p = 2` this is the mean-value residual.
    pub residual: f64,
    pub energy: f64,
    /// CG iterations for `p = 2`, sweeps for other `p`.
    pub iterations: usize,
}

/// Solves the Dirichlet problem.
///
/// `p = 2` uses Jacobi-preconditioned conjugate gradients on the interior
/// equations until the mean-value residual is within tolerance. Other `p`
/// start from the harmonic solution and run cyclic coordinate descent, each
/// interior vertex moved to the exact minimizer of its local energy, until
/// the relative energy decrease of a sweep is within tolerance.
pub fn solve_dirichlet(prob: &DirichletProblem) -> Result<DirichletSolution> {
    let g = &prob.graph;
    check_boundary_contact(g)?;

    let mut values = vec![0.0; g.len()];
    for (&i, &v) in &prob.boundary_values {
        values[i] = v;
    }

    let mut bvals = prob.boundary_values.values();
    let degenerate = match bvals.next() {
        Some(&first) => bvals.all(|&v| v == first).then_some(first),
        None => None,
    };
    if let Some(c) = degenerate {
        values.iter_mut().for_each(|v| *v = c);
        return finish(prob, values, 0);
    }

    let iterations = harmonic_cg(g, &mut values, prob.tolerance, prob.max_iters)?;
    if prob.p == 2.0 {
        return finish(prob, values, iterations);
    }
    let sweeps = coordinate_descent(g, &mut values, prob.p, prob.tolerance, prob.max_iters)?;
    finish(prob, values, sweeps)
}

fn finish(prob: &DirichletProblem, values: Vec<f64>, iterations: usize) -> Result<DirichletSolution> {
    let g = &prob.graph;
    let residual = p_laplacian_residual(&values, g, prob.p);
    let energy = energy_of(&values, g, prob.p);
    Ok(DirichletSolution {
        function: VertexFunction::new(values, g.oracle_id())?,
        residual,
        energy,
        iterations,
    })
}

fn check_boundary_contact(g: &FiniteGraph) -> Result<()> {
    let mut reached = g.boundary_mask().to_vec();
    let mut queue: VecDeque<usize> = g.boundary_vertices().collect();
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if !reached[w] {
                reached[w] = true;
                queue.push_back(w);
            }
        }
    }
    match reached.iter().position(|&r| !r) {
        Some(i) => Err(Error::NoBoundaryContact(i)),
        None => Ok(()),
    }
}

/// `max_v |sum_w |f(w)-f(v)|^(p-2) (f(w)-f(v))| / deg(v)` over interior `v`.
pub fn p_laplacian_residual(values: &[f64], g: &FiniteGraph, p: f64) -> f64 {
    g.interior_vertices()
        .filter(|&i| g.degree(i) > 0)
        .map(|i| {
            let fi = values[i];
            let s: f64 = g
                .neighbors(i)
                .iter()
                .map(|&j| {
                    let d = values[j] - fi;
                    d.signum() * d.abs().powf(p - 1.0)
                })
                .sum();
            s.abs() / g.degree(i) as f64
        })
        .fold(0.0, f64::max)
}

/// Preconditioned CG on `deg(v) f(v) - sum_{w interior} f(w) = sum_{w boundary} f(w)`.
fn harmonic_cg(g: &FiniteGraph, values: &mut [f64], tol: f64, max_iters: usize) -> Result<usize> {
    let interior: Vec<usize> = g.interior_vertices().collect();
    if interior.is_empty() {
        return Ok(0);
    }
    let mut slot = vec![usize::MAX; g.len()];
    for (k, &v) in interior.iter().enumerate() {
        slot[v] = k;
    }
    let n = interior.len();
    let diag: Vec<f64> = interior.iter().map(|&v| g.degree(v) as f64).collect();
    let mut rhs = vec![0.0; n];
    for (k, &v) in interior.iter().enumerate() {
        rhs[k] = g
            .neighbors(v)
            .iter()
            .filter(|&&w| slot[w] == usize::MAX)
            .map(|&w| values[w])
            .sum();
    }
    let apply = |x: &[f64], out: &mut [f64]| {
        for (k, &v) in interior.iter().enumerate() {
            let mut acc = diag[k] * x[k];
            for &w in g.neighbors(v) {
                let s = slot[w];
                if s != usize::MAX {
                    acc -= x[s];
                }
            }
            out[k] = acc;
        }
    };
    let residual_norm = |r: &[f64]| r.iter().zip(&diag).map(|(r, d)| (r / d).abs()).fold(0.0, f64::max);

    // warm start from the mean boundary value
    let mean = rhs.iter().sum::<f64>() / diag.iter().sum::<f64>().max(1.0);
    let mut x = vec![mean; n];
    let mut ax = vec![0.0; n];
    let mut r = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut ap = vec![0.0; n];

    let mut iters = 0;
    'restart: loop {
        apply(&x, &mut ax);
        for k in 0..n {
            r[k] = rhs[k] - ax[k];
            z[k] = r[k] / diag[k];
            p[k] = z[k];
        }
        let mut res = residual_norm(&r);
        if res <= tol {
            break;
        }
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        for _ in 0..n.max(50) {
            if iters >= max_iters {
                return Err(Error::NonConvergence {
                    iterations: iters,
                    residual: res,
                });
            }
            iters += 1;
            apply(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
            if pap <= 0.0 || !pap.is_finite() {
                continue 'restart;
            }
            let alpha = rz / pap;
            for k in 0..n {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
                z[k] = r[k] / diag[k];
            }
            res = residual_norm(&r);
            if res <= tol {
                // confirm against the true residual before accepting
                continue 'restart;
            }
            let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_new / rz;
            rz = rz_new;
            for k in 0..n {
                p[k] = z[k] + beta * p[k];
            }
        }
    }
    for (k, &v) in interior.iter().enumerate() {
        values[v] = x[k];
    }
    Ok(iters)
}

/// Minimizer of `t -> sum_a |t - a|^p` over the neighbor values `a`.
pub(crate) fn local_minimizer(nbr: &[f64], p: f64, start: f64) -> f64 {
    let (mut lo, mut hi) = nbr
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &a| (l.min(a), h.max(a)));
    if lo == hi {
        return lo;
    }
    let deriv = |t: f64| -> (f64, f64) {
        let mut g = 0.0;
        let mut h = 0.0;
        for &a in nbr {
            let d = t - a;
            let ad = d.abs();
            if ad > 0.0 {
                let pw = ad.powf(p - 2.0);
                g += d * pw;
                h += pw;
            } else if p < 2.0 {
                h = f64::INFINITY;
            }
        }
        (g, (p - 1.0) * h)
    };
    let mut t = start.clamp(lo, hi);
    for _ in 0..200 {
        let (g, h) = deriv(t);
        if g == 0.0 {
            return t;
        }
        if g > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let newton = t - g / h;
        let next = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(f64::MIN_POSITIVE)
            || hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs())
        {
            return next;
        }
        t = next;
    }
    t
}

fn coordinate_descent(g: &FiniteGraph, values: &mut [f64], p: f64, tol: f64, max_iters: usize) -> Result<usize> {
    let interior: Vec<usize> = g.interior_vertices().collect();
    let mut energy = energy_of(values, g, p);
    let mut buf = Vec::new();
    for sweep in 1..=max_iters {
        for &v in &interior {
            buf.clear();
            buf.extend(g.neighbors(v).iter().map(|&w| values[w]));
            values[v] = local_minimizer(&buf, p, values[v]);
        }
        let next = energy_of(values, g, p);
        let decrease = (energy - next) / energy.max(f64::MIN_POSITIVE);
        energy = next;
        if decrease <= tol {
            return Ok(sweep);
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iters,
        residual: p_laplacian_residual(values, g, p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> FiniteGraph {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let mut bd = vec![false; n];
        bd[0] = true;
        bd[n - 1] = true;
        FiniteGraph::from_edges(n, &edges, bd).unwrap()
    }

    fn path_problem(n: usize, p: f64) -> DirichletProblem {
        let g = path(n + 1);
        DirichletProblem::new(g, BTreeMap::from([(0, 0.0), (n, 1.0)]), p).unwrap()
    }

    #[test]
    fn path_is_linear_for_all_p() {
        for p in [1.2, 1.5, 2.0, 3.0, 5.0] {
            let sol = solve_dirichlet(&path_problem(10, p)).unwrap();
            for (i, v) in sol.function.values().iter().enumerate() {
                assert!((v - i as f64 / 10.0).abs() < 1e-8, "p={p} i={i} v={v}");
            }
        }
    }

    #[test]
    fn four_cycle_two_pins() {
        let g = FiniteGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], vec![true, false, true, false]).unwrap();
        let prob = DirichletProblem::new(g, BTreeMap::from([(0, 0.0), (2, 1.0)]), 2.0).unwrap();
        let sol = solve_dirichlet(&prob).unwrap();
        assert!((sol.function.values()[1] - 0.5).abs() < 1e-8);
        assert!((sol.function.values()[3] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn degenerate_data_is_constant() {
        let g = path(6);
        let prob = DirichletProblem::new(g, BTreeMap::from([(0, 2.5), (5, 2.5)]), 3.0).unwrap();
        let sol = solve_dirichlet(&prob).unwrap();
        assert!(sol.function.values().iter().all(|&v| v == 2.5));
        assert_eq!(sol.energy, 0.0);
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn rejects_partial_or_misplaced_boundary_data() {
        let g = path(5);
        assert!(DirichletProblem::new(g.clone(), BTreeMap::from([(0, 0.0)]), 2.0).is_err());
        assert!(DirichletProblem::new(g.clone(), BTreeMap::from([(0, 0.0), (4, 1.0), (2, 0.0)]), 2.0).is_err());
        assert!(DirichletProblem::new(g, BTreeMap::from([(0, 0.0), (4, 1.0)]), 1.0).is_err());
    }

    #[test]
    fn isolated_interior_component_is_rejected() {
        let g = FiniteGraph::from_edges(5, &[(0, 1), (1, 2), (3, 4)], vec![true, false, true, false, false]).unwrap();
        let prob = DirichletProblem::new(g, BTreeMap::from([(0, 0.0), (2, 1.0)]), 2.0).unwrap();
        assert!(matches!(solve_dirichlet(&prob), Err(Error::NoBoundaryContact(3))));
    }

    #[test]
    fn non_convergence_reports_residual() {
        let prob = path_problem(50, 2.0).with_max_iters(2);
        match solve_dirichlet(&prob) {
            Err(Error::NonConvergence { iterations, residual }) => {
                assert_eq!(iterations, 2);
                assert!(residual > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn local_minimizer_matches_median_like_cases() {
        // p = 2: mean
        assert!((local_minimizer(&[0.0, 1.0, 5.0], 2.0, 0.0) - 2.0).abs() < 1e-14);
        // symmetric data: midpoint for any p
        for p in [1.1, 1.5, 3.0, 7.0] {
            assert!((local_minimizer(&[-1.0, 3.0], p, 0.0) - 1.0).abs() < 1e-12);
        }
        // derivative vanishes at the returned point
        let a = [0.0, 0.1, 2.0, 2.5];
        let t = local_minimizer(&a, 1.5, 1.0);
        let g: f64 = a.iter().map(|&x| (t - x).signum() * (t - x).abs().sqrt()).sum();
        assert!(g.abs() < 1e-12, "{g}");
    }
}
