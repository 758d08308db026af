use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Expanding search never produced a sign change.
    #[error("no sign change found for {quantity} up to {limit}")]
    BracketNotFound { quantity: &'static str, limit: f64 },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    /// The flux variable left [-1, 1] by more than the configured tolerance.
    #[error("flux integration unstable at d = {at}: flux {flux}")]
    StepInstability { at: f64, flux: f64 },

    #[error("line search failed at Newton iteration {iteration} (residual {residual:e})")]
    LineSearch { iteration: usize, residual: f64 },

    /// The target height is infinite, so no finite width reproduces it.
    #[error("target height is unbounded")]
    Unbounded,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of an iterative numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BracketNotFound { .. }
                | Error::NonConvergence { .. }
                | Error::Quadrature { .. }
                | Error::StepInstability { .. }
                | Error::LineSearch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
