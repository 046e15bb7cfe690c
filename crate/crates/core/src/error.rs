use thiserror::Error;

use crate::graph::VertexKey;

/// Errors raised by graph construction, materialization and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {0} is not a vertex of {1}")]
    UnknownVertex(VertexKey, String),

    #[error("vertex budget of {limit} exceeded after materializing {reached} vertices")]
    BudgetExceeded { limit: usize, reached: usize },

    #[error("index mismatch: expected length {expected}, got {actual}")]
    IndexMismatch { expected: usize, actual: usize },

    #[error("invalid Dirichlet problem: {0}")]
    InvalidProblem(String),

    #[error("interior component containing vertex {0} has no boundary contact")]
    NoBoundaryContact(usize),

    #[error("solver did not converge within {iterations} iterations (last residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("invalid spanning line: {0}")]
    InvalidLine(String),

    #[error("descriptor error: {0}")]
    Descriptor(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
