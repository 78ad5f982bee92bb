use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyzerError {
    #[error("unsupported precision of {0} bits (allowed: 256..=2048)")]
    InvalidPrecision(u32),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{op}: total mass deviates from 1 by 2^{log2_error:.1}")]
    Normalization { op: &'static str, log2_error: f64 },
    #[error("precision mismatch between operands")]
    PrecisionMismatch,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("{what}: log2 value {low:.9} at {low_bits} bits vs {high:.9} at {high_bits} bits")]
    NotConverged { what: String, low: f64, high: f64, low_bits: u32, high_bits: u32 },
    #[error(transparent)]
    Core(#[from] ringlab_core::Error),
}

pub type Result<T> = std::result::Result<T, AnalyzerError>;
