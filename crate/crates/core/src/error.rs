use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Jacobi sweeps exhausted before the off-diagonal mass dropped below threshold.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})")]
    NonConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// A negative power or logarithm was requested of a matrix that is not positive definite.
    #[error("singular power: minimum eigenvalue {min_eigenvalue:e} is not above the positivity threshold")]
    SingularPower { min_eigenvalue: f64 },

    #[error("invalid dimension: {0}")]
    InvalidDim(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("the first argument must be a nonzero matrix")]
    ZeroMatrix,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
