use thiserror::Error;

use crate::permgroup::PermError;
use crate::tensor::ParseError;

#[derive(Debug, Error)]
pub enum InvarError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("free index `{0}` in a scalar context")]
    FreeIndex(String),
    #[error("operation not available in dimension {0}")]
    Dimension(u32),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("no saturation after {0} samples")]
    Saturation(u64),
    #[error("unknown invariant {0}")]
    UnknownId(String),
    #[error("{0} is outside the database range")]
    OutOfRange(String),
    #[error("inconsistent relation system: {0}")]
    Inconsistent(String),
    #[error("integer overflow during component evaluation")]
    Overflow,
    #[error("database format error at line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("simplification level {0} is not available")]
    Level(u8),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = InvarError> = std::result::Result<T, E>;
