use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("negative value {value} at {location}")]
    NegativeEntry { location: String, value: f64 },

    #[error("non-finite value at {0}")]
    NonFinite(String),

    #[error("duplicate tensor entry ({i}, {j}, {k})")]
    DuplicateEntry { i: usize, j: usize, k: usize },

    #[error("index ({i}, {j}, {k}) out of range for dimension {n}")]
    IndexOutOfRange { i: usize, j: usize, k: usize, n: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// 0-based indices that cannot reach the rest of the graph (or a positive sum).
    #[error("reducible matrix: indices {indices:?} are cut off")]
    Reducible { indices: Vec<usize> },

    #[error("zero pivot at elimination step {step}")]
    SingularPivot { step: usize },

    #[error("{n} exceeds the enumeration limit {max}")]
    TooLarge { n: usize, max: usize },

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
