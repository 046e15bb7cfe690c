//! Lamplighter and product graphs as lazy oracles, with numerical probes of
//! discrete potential theory on them: Dirichlet solvers for the p-Laplacian,
//! annulus capacities, isoperimetric profiles, spanning lines in k-fuzz
//! graphs and random-walk Liouville probes.

pub mod error;
pub mod graph;
pub mod isoperimetry;
pub mod potential;
pub mod spanning;
pub mod walk;

pub use error::{Error, Result};
