use thiserror::Error;

/// Errors raised by the matrix kernel, the bound evaluators and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadError {
    #[error("Hermitian eigensolver did not converge on a {dim}x{dim} matrix")]
    EigenFailure { dim: usize },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e} below -{tolerance:.3e}")]
    NotPsd { min_eigenvalue: f64, tolerance: f64 },

    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("scalar function returned {value} at spectrum point {point}")]
    FunctionRange { point: f64, value: f64 },

    #[error("objective returned a non-finite value")]
    Objective,

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("vector is not unit length: norm {norm}")]
    NotUnit { norm: f64 },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("format error: {0}")]
    Format(String),
}

impl RadError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        RadError::Domain(msg.into())
    }
}

impl From<std::io::Error> for RadError {
    fn from(e: std::io::Error) -> Self {
        RadError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, RadError>;
