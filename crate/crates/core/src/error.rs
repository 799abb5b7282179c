use thiserror::Error;

/// Errors raised by the polynomial, assembly and solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular point: {0}")]
    Singular(String),

    #[error("matrix is not positive definite (dimension {dim}, smallest diagonal entry {min_diagonal:e}, diagonal ratio {diagonal_ratio:e})")]
    NotPositiveDefinite {
        dim: usize,
        min_diagonal: f64,
        diagonal_ratio: f64,
    },

    #[error("no convergence after {iterations} iterations (best value {best_value}, residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        best_value: f64,
        residual: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
