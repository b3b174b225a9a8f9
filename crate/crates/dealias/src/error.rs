use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("size mismatch: expected {expected}, got {got} ({what})")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("unsupported plan: {0}")]
    UnsupportedPlan(String),
    #[error("aliasing buffers: {0}")]
    Aliasing(&'static str),
    #[error("oracle work cap exceeded: {0} multiply-adds (override to proceed)")]
    OracleCapExceeded(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
