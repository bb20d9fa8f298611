use thiserror::Error;

/// Errors raised by the numerical kernels, solvers and file readers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its admissible domain. The message names the
    /// violated constraint.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("series or iteration did not converge: {0}")]
    NonConvergent(String),

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("inverse Laplace oracle failed: {0}")]
    OracleFailure(String),

    /// Two contributing residue poles merge into a pole of order two or more.
    #[error("pole collision at s = {pole} (order {order})")]
    PoleCollision { pole: f64, order: usize },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("ill-posed problem: {0}")]
    IllPosed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    /// True for errors caused by bad input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_) | Error::IllPosed(_) | Error::Parse(_)
        )
    }
}
