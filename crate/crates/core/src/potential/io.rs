use std::io::Write;

use serde::{Deserialize, Serialize};

use super::dirichlet::{DirichletProblem, DirichletSolution};
use crate::error::Result;
use crate::graph::GraphDescriptor;

/// JSON form of a solved Dirichlet problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletRecord {
    pub graph: GraphDescriptor,
    #[serde(rename = "R")]
    pub radius: usize,
    pub p: f64,
    pub boundary: Vec<(usize, f64)>,
    pub solution: Vec<f64>,
    pub residual: f64,
    pub energy: f64,
}

impl DirichletRecord {
    pub fn new(graph: GraphDescriptor, radius: usize, prob: &DirichletProblem, sol: &DirichletSolution) -> Self {
        DirichletRecord {
            graph,
            radius,
            p: prob.p(),
            boundary: prob.boundary_values().iter().map(|(&i, &v)| (i, v)).collect(),
            solution: sol.function.values().to_vec(),
            residual: sol.residual,
            energy: sol.energy,
        }
    }
}

/// One row of the `(R, oscillation, energy, capacity)` series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    #[serde(rename = "R")]
    pub radius: usize,
    pub oscillation: Option<f64>,
    pub energy: Option<f64>,
    pub capacity: Option<f64>,
}

pub fn write_probe_csv<W: Write>(rows: &[ProbeRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_has_documented_keys() {
        let rec = DirichletRecord {
            graph: GraphDescriptor::Line,
            radius: 2,
            p: 2.0,
            boundary: vec![(1, 0.0), (2, 1.0)],
            solution: vec![0.5, 0.0, 1.0],
            residual: 0.0,
            energy: 0.5,
        };
        let v: serde_json::Value = serde_json::to_value(&rec).unwrap();
        for key in ["graph", "R", "p", "boundary", "solution", "residual", "energy"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["boundary"][1], serde_json::json!([2, 1.0]));
    }

    #[test]
    fn csv_header_and_blanks() {
        let rows = vec![ProbeRow {
            radius: 4,
            oscillation: Some(0.25),
            energy: Some(1.0),
            capacity: None,
        }];
        let mut buf = Vec::new();
        write_probe_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "R,oscillation,energy,capacity\n4,0.25,1.0,\n"
        );
    }
}
