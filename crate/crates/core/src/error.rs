use thiserror::Error;

/// Errors raised by precondition checks across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("multi-index of order {order} exceeds truncation K = {k}")]
    OutOfTruncation { order: usize, k: usize },
    #[error("need at least {required} Gauss-Hermite points per axis for K = {k}, got {got}")]
    TooFewPoints { required: usize, k: usize, got: usize },
    #[error("non-finite input: {0}")]
    NonFinite(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("unsupported monomial: {0}")]
    Unsupported(String),
    #[error("outside integrability range: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}
