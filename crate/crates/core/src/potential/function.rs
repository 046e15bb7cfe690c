use crate::error::{Error, Result};
use crate::graph::FiniteGraph;

/// Real values on the vertices of a [`FiniteGraph`], indexed like its vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction {
    values: Vec<f64>,
    graph_ref: String,
}

impl VertexFunction {
    pub fn new(values: Vec<f64>, graph_ref: impl Into<String>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite value at vertex {i}")));
        }
        Ok(VertexFunction {
            values,
            graph_ref: graph_ref.into(),
        })
    }

    /// Wraps `values` for `g`, checking the length.
    pub fn on(g: &FiniteGraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != g.len() {
            return Err(Error::IndexMismatch {
                expected: g.len(),
                actual: values.len(),
            });
        }
        VertexFunction::new(values, g.oracle_id())
    }

    pub fn constant(g: &FiniteGraph, c: f64) -> Self {
        VertexFunction {
            values: vec![c; g.len()],
            graph_ref: g.oracle_id().to_string(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn graph_ref(&self) -> &str {
        &self.graph_ref
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        VertexFunction {
            values: self.values.iter().map(|v| c * v).collect(),
            graph_ref: self.graph_ref.clone(),
        }
    }

    fn check(&self, g: &FiniteGraph) -> Result<()> {
        if self.values.len() == g.len() {
            Ok(())
        } else {
            Err(Error::IndexMismatch {
                expected: g.len(),
                actual: self.values.len(),
            })
        }
    }
}

/// Values on the unordered edges of a graph, in [`FiniteGraph::edges`] order,
/// oriented from the lower to the higher vertex index.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeFunction {
    values: Vec<f64>,
}

impl EdgeFunction {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The same edge values under the opposite orientation convention.
    pub fn reversed(&self) -> EdgeFunction {
        EdgeFunction {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// `(sum |x|^p)^(1/p)`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `grad f(i, j) = f(j) - f(i)` on every edge with `i < j`.
pub fn gradient(f: &VertexFunction, g: &FiniteGraph) -> Result<EdgeFunction> {
    f.check(g)?;
    let v = f.values();
    Ok(EdgeFunction {
        values: g.edges().into_iter().map(|(i, j)| v[j] - v[i]).collect(),
    })
}

/// `sum over edges |grad f|^p`, summed in edge order.
pub fn p_energy(f: &VertexFunction, g: &FiniteGraph, p: f64) -> Result<f64> {
    f.check(g)?;
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("p-energy needs p >= 1, got {p}")));
    }
    Ok(energy_of(f.values(), g, p))
}

pub(crate) fn energy_of(values: &[f64], g: &FiniteGraph, p: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..g.len() {
        for &j in g.neighbors(i) {
            if j > i {
                total += pow_abs(values[j] - values[i], p);
            }
        }
    }
    total
}

#[inline]
pub(crate) fn pow_abs(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x * x
    } else {
        x.abs().powf(p)
    }
}

/// Largest `|f(v) - mean of f over neighbors of v|` over interior vertices.
pub fn harmonic_residual(f: &VertexFunction, g: &FiniteGraph) -> Result<f64> {
    f.check(g)?;
    Ok(mean_value_residual(f.values(), g))
}

pub(crate) fn mean_value_residual(values: &[f64], g: &FiniteGraph) -> f64 {
    g.interior_vertices()
        .filter(|&i| g.degree(i) > 0)
        .map(|i| {
            let nb = g.neighbors(i);
            let mean = nb.iter().map(|&j| values[j]).sum::<f64>() / nb.len() as f64;
            (values[i] - mean).abs()
        })
        .fold(0.0, f64::max)
}
