//! Extended precision arithmetic and high-accuracy reference solutions.

mod double_double;
pub mod reference;

pub use double_double::{xadd, xdiv, xmul, DoubleDouble, ParseDoubleDoubleError};
pub use reference::{reference_solution, ReferenceMode, ReferenceSolution};
