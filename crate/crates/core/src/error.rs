use thiserror::Error;

/// Errors raised by the ring, codec, coding and KEM layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parameter mismatch between operands")]
    ParamMismatch,
    #[error("modulus {q} has no primitive {order}-th root of unity")]
    UnsupportedModulus { q: u32, order: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("encode error: {0}")]
    Encode(String),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("capacity exceeded: {needed} coefficients needed, {available} available")]
    Capacity { needed: usize, available: usize },
    #[error("infeasible code: {0}")]
    InfeasibleCode(String),
    #[error("scheme does not fit parameters: {0}")]
    SchemeMismatch(String),
    #[error("decoding failed")]
    DecodeFailure,
}

pub type Result<T> = std::result::Result<T, Error>;
