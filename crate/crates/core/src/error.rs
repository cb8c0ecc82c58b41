use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("walk degree n must be even and at least 2, got {0}")]
    OddDegree(usize),
    #[error("p must lie in [0, 1], got {0}")]
    InvalidProbability(String),
    #[error("{what} cap exceeded: n = {n} > {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("memo conflict for key {0}: re-insertion carried a different value")]
    MemoConflict(String),
    #[error("identity check failed: {0}")]
    IdentityFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
