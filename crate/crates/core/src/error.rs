use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Structure constants, matrices or spinors whose shapes do not line up.
    #[error("structural error: {0}")]
    Structure(String),

    #[error("not a Lie algebra: Jacobi identity violated by {0:.3e}")]
    NotLieAlgebra(f64),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("frame index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid spinor: the zero spinor cannot carry an endomorphism")]
    ZeroSpinor,

    #[error("unsupported dimension {0}: spinor analysis needs an odd dimension 2n+1 >= 3")]
    UnsupportedDimension(usize),

    #[error("matrix is not symmetric (asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("dense operators are limited to n <= {max} (requested n = {n})")]
    TooLarge { n: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for domain validation, 3 for I/O and parsing.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) | Error::Json(_) => 3,
            _ => 2,
        }
    }
}
