//! Problem construction: built-in instances, graph-derived tensors and file readers.

pub mod builtin;
mod graph;

pub use builtin::{AlphaSpec, Builtin};
pub use graph::{
    build_pagerank_tensor, column_normalize_substochastic, heavy_tailed_v, parse_matrix_market,
    parse_vector, read_matrix_market, three_cycle_tensor, Adjacency, MAX_PAGERANK_N,
};
