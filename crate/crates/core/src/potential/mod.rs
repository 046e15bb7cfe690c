//! Gradients, p-energies, harmonicity and Dirichlet solvers on finite balls.

mod dirichlet;
mod function;
mod io;
mod probes;
mod split;

pub use dirichlet::{
    p_laplacian_residual, solve_dirichlet, DirichletProblem, DirichletSolution, DEFAULT_MAX_ITERS, DEFAULT_TOLERANCE,
};
pub use function::{gradient, harmonic_residual, p_energy, EdgeFunction, VertexFunction};
pub use io::{write_probe_csv, DirichletRecord, ProbeRow};
pub use probes::{annulus_capacity, capacity_problem, oscillation_probe, OscillationProbe, ProbeOptions};
pub use split::{split_by_name, BaseSign, FirstLetter, LabelTable, SplitRule};
