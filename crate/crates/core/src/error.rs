use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow computing {0}")]
    Overflow(String),
    #[error("degree mismatch: expected {expected}, got {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("coefficient domains differ")]
    DomainMismatch,
    #[error("characteristic {characteristic} too small: need a prime above {needed}")]
    UnsupportedCharacteristic { characteristic: u64, needed: u64 },
    /// A prime modulus or root-of-unity requirement cannot be met.
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
