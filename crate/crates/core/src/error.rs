use thiserror::Error;

use crate::protocol::ClientId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("value {value} does not fit in {bits} signed bits")]
    FixedPointOverflow { value: String, bits: u32 },

    #[error("no discrete logarithm within bound {bound}")]
    DlogNotFound { bound: u64 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid defense hyperparameters: {0}")]
    InvalidHyperparameters(String),

    #[error("threshold {t} must satisfy 0 < t <= n = {n}")]
    InvalidThreshold { t: usize, n: usize },

    #[error("need at least {needed} shares, got {got}")]
    NotEnoughShares { needed: usize, got: usize },

    #[error("duplicate or zero share index {0}")]
    BadShareIndex(u32),

    #[error("sharing parameters differ between combined sharings")]
    SharingMismatch,

    #[error("sum of squared projections exceeds the bound B0")]
    BoundExceeded,

    #[error("value out of range for a {bits}-bit range proof")]
    RangeValueOutOfRange { bits: u32 },

    #[error("divisibility violation: {e} does not divide {d}")]
    Divisibility { d: usize, e: usize },

    #[error("decode error: {0}")]
    Decode(String),

    #[error("server judged malicious: {0}")]
    AbortServerMalicious(String),

    #[error("insufficient aggregated shares: need {needed}, have {valid}")]
    InsufficientShares { needed: usize, valid: usize },

    #[error("aggregated share from client {0} failed verification")]
    ShareVerifyFailed(ClientId),

    #[error("aggregate coordinate {coordinate} is outside the recoverable range")]
    DlogOutOfRange { coordinate: usize },

    #[error("protocol message out of order: {0}")]
    Stage(String),

    #[error("encryption failure")]
    Crypto,
}
