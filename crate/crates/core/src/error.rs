use thiserror::Error;

/// Errors produced while constructing or applying warped filter banks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WarpError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {value} outside the warping domain {domain}")]
    DomainError { value: f64, domain: &'static str },

    #[error("prototype window is degenerate: {0}")]
    DegenerateWindow(String),

    #[error("no channel of the warped bank intersects the frequency grid")]
    EmptyBank,

    #[error("frequency bin {bin} is not covered by any channel (frame-operator diagonal is zero)")]
    CoverageError { bin: usize },

    #[error("channel {m} is not painless: {span} nonzero bins exceed {slots} time positions")]
    NotPainless { m: i32, span: usize, slots: usize },

    #[error("signal length {got} does not match bank length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("coefficient set does not match the bank geometry: {0}")]
    FingerprintMismatch(String),

    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, WarpError>;
