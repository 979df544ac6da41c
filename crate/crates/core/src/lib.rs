//! Multilinear PageRank and quadratic vector equations `x = a + Bx²`, solved
//! with subtraction-free GTH elimination on M-matrices.

pub mod analysis;
pub mod error;
pub mod ingest;
pub mod linalg;
pub mod mmatrix;
pub mod precision;
pub mod scalar;
pub mod solvers;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use mmatrix::{Orientation, TripletMMatrix};
pub use precision::DoubleDouble;
pub use scalar::Real;
pub use solvers::{solve, Method, Problem, SolveReport, SolverOptions, Start, Termination};
pub use tensor::Tensor3;
