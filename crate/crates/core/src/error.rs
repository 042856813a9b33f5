use thiserror::Error;

/// Errors produced by the formation model, the condition checker and the searches.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The x-derivative of the benefit was requested where it does not exist.
    #[error("benefit derivative undefined at x = {x}, y = {y}")]
    DerivativeDomain { x: f64, y: f64 },

    #[error("agent index {index} out of range for {followers} followers")]
    AgentIndex { index: usize, followers: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid interval [{lo}, {hi}]: {reason}")]
    InvalidInterval { lo: f64, hi: f64, reason: &'static str },

    #[error("`{name}` = {value} outside admissible range ({lo}, {hi})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("quadrature did not converge: estimated error {achieved:e} > requested {requested:e}")]
    QuadratureNotConverged { achieved: f64, requested: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
