//! Named boundary-labeling rules for two-valued Dirichlet data.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{FiniteGraph, VertexKey};

/// Assigns a boundary value to each boundary vertex of a ball.
pub trait SplitRule: fmt::Debug + Send + Sync {
    /// Versioned rule name, e.g. `base-sign/v1`.
    fn name(&self) -> String;

    fn label(&self, g: &FiniteGraph, index: usize) -> Result<f64>;
}

/// `1` when the first space coordinate is `>= 0`, else `0`. The space
/// coordinate is the key itself on `Z^d`, the base of a lamplighter key and
/// the left factor of a product key.
#[derive(Debug, Clone, Copy, Default)]
pub struct BaseSign;

impl SplitRule for BaseSign {
    fn name(&self) -> String {
        "base-sign/v1".into()
    }

    fn label(&self, g: &FiniteGraph, index: usize) -> Result<f64> {
        let key = g.key(index);
        match key.base_coordinate() {
            Some(x) => Ok(if x >= 0 { 1.0 } else { 0.0 }),
            None => Err(Error::InvalidParameter(format!(
                "base-sign split has no coordinate for {key}"
            ))),
        }
    }
}

/// Subtree side on a free group: words starting with a positive letter get
/// `1`, words starting with an inverse letter get `0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FirstLetter;

impl SplitRule for FirstLetter {
    fn name(&self) -> String {
        "first-letter/v1".into()
    }

    fn label(&self, g: &FiniteGraph, index: usize) -> Result<f64> {
        match g.key(index) {
            VertexKey::Word(w) if !w.is_empty() => Ok(if w[0] > 0 { 1.0 } else { 0.0 }),
            other => Err(Error::InvalidParameter(format!(
                "first-letter split needs a nonempty word, got {other}"
            ))),
        }
    }
}

/// Explicit per-index labels, read from `index value` lines.
#[derive(Debug, Clone, Default)]
pub struct LabelTable {
    labels: BTreeMap<usize, f64>,
}

impl LabelTable {
    pub fn new(labels: BTreeMap<usize, f64>) -> Self {
        LabelTable { labels }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parsed = match (it.next(), it.next(), it.next()) {
                (Some(i), Some(v), None) => i.parse::<usize>().ok().zip(v.parse::<f64>().ok()),
                _ => None,
            };
            let (i, v) = parsed
                .ok_or_else(|| Error::InvalidParameter(format!("label file line {}: expected `index value`", n + 1)))?;
            labels.insert(i, v);
        }
        Ok(LabelTable { labels })
    }
}

impl SplitRule for LabelTable {
    fn name(&self) -> String {
        "label-file/v1".into()
    }

    fn label(&self, _g: &FiniteGraph, index: usize) -> Result<f64> {
        self.labels
            .get(&index)
            .copied()
            .ok_or_else(|| Error::InvalidProblem(format!("label file has no value for boundary vertex {index}")))
    }
}

/// Looks up a shipped rule by name (with or without the version suffix).
pub fn split_by_name(name: &str) -> Result<Box<dyn SplitRule>> {
    match name.split('/').next().unwrap_or(name) {
        "base-sign" | "sign" => Ok(Box::new(BaseSign)),
        "first-letter" | "subtree" => Ok(Box::new(FirstLetter)),
        _ => Err(Error::InvalidParameter(format!("unknown split rule {name:?}"))),
    }
}
