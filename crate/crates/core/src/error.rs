use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("2F1 lower parameter c = {re} + {im}i is a nonpositive integer")]
    ParameterPole { re: f64, im: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quaternion argument is zero")]
    ZeroQuaternion,

    #[error("zonal grid measure constant has not been fitted")]
    NotNormalized,

    #[error("invalid K-type ({p}, {q}): q - p must be a nonnegative even integer")]
    InvalidKType { p: i64, q: i64 },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
