use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{quantity} {value} exceeds cap {cap}")]
    CapExceeded {
        quantity: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("residue {a} is not invertible modulo {m}")]
    NotInvertible { a: u64, m: u64 },

    #[error("level {m} outside valid range 1..={max}")]
    LevelOutOfRange { m: u32, max: u32 },

    #[error("exponent {a} outside valid range 0..{period}")]
    ExponentOutOfRange { a: u64, period: u64 },

    #[error("bit vector has length {len}, period requires {expected}")]
    LengthMismatch { len: usize, expected: u64 },

    #[error("bit vector entries must be 0 or 1 (found {value} at index {index})")]
    NonBinaryEntry { index: usize, value: u8 },

    #[error("determinant is zero, divisibility comparison undefined")]
    ZeroDeterminant,

    #[error("non-integral closed-form factor: {0}")]
    NonIntegralFactor(String),

    #[error("need at least {min} bits for rational approximation, got {len}")]
    PrefixTooShort { len: usize, min: usize },
}
