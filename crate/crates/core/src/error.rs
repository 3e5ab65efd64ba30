use thiserror::Error;

/// Errors produced by the coder, the models and the edge-list reader.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid symbol range: freq={freq} start={start} total={total}")]
    InvalidRange { freq: u64, start: u64, total: u64 },

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: u64 },

    #[error("corrupt stream: {0}")]
    CorruptStream(&'static str),

    #[error("integrity check failed: {0}")]
    Integrity(&'static str),

    #[error("unsupported container: {0}")]
    Unsupported(String),

    #[error("bound violated: {0}")]
    Bound(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(&'static str),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
