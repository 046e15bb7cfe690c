//! Vertex encodings, graph oracles and finite ball materialization.

mod ball;
mod constructions;
mod descriptor;
pub mod families;
mod key;
mod oracle;
pub(crate) use oracle::normalize;

pub use ball::{ball, end_estimate, FiniteGraph, DEFAULT_BUDGET};
pub use constructions::{direct_product, k_fuzz, lamplighter, DirectProduct, KFuzz, Lamplighter};
pub use descriptor::{adjacent_start, GraphDescriptor, KeySpec};
pub use families::{
    abelian_cayley_graph, caterpillar_graph, cayley_graph, cycle_graph, free_group_graph, grid_graph, line_graph,
    path_graph, star_graph, Generator,
};
pub use key::VertexKey;
pub use oracle::{bfs_layers, bounded_distance, check_oracle, GraphOracle, Oracle, OracleDefect};
