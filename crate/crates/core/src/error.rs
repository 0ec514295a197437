use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Each variant maps to one failure family so callers (the CLI in
/// particular) can translate them into distinct exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function has a pole at {0}")]
    Pole(f64),

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error:e}")]
    NonConvergence { estimate: f64, error: f64 },

    #[error("integrand is not O(y^2) at the origin: |g(y)|/y^2 grows from {near_one:e} to {near_zero:e}")]
    Divergence { near_one: f64, near_zero: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular parameter: {0}")]
    Singular(String),

    #[error("Poisson mean {mean:e} exceeds the configured cap {cap:e}")]
    Overflow { mean: f64, cap: f64 },

    #[error("empty sample batch")]
    EmptyBatch,

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("non-integrable combination: {0}")]
    NonIntegrable(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
