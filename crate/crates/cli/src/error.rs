use std::fmt;

use warpbank::WarpError;

pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_COVERAGE: i32 = 3;
pub const EXIT_LENGTH: i32 = 4;
pub const EXIT_COEFFICIENTS: i32 = 5;
pub const EXIT_NOT_PAINLESS: i32 = 6;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(EXIT_INVALID, message)
    }

    pub fn io(path: &std::path::Path, err: impl fmt::Display) -> Self {
        Self::new(EXIT_IO, format!("{}: {err}", path.display()))
    }

    /// Maps a library error; `Format` errors count as invalid input.
    pub fn from_warp(err: WarpError) -> Self {
        let code = match err {
            WarpError::CoverageError { .. } => EXIT_COVERAGE,
            WarpError::LengthMismatch { .. } => EXIT_LENGTH,
            WarpError::FingerprintMismatch(_) => EXIT_COEFFICIENTS,
            WarpError::NotPainless { .. } => EXIT_NOT_PAINLESS,
            _ => EXIT_INVALID,
        };
        let hint = match err {
            WarpError::CoverageError { .. } => {
                " (the frame-operator diagonal must be bounded below: every frequency needs a channel)"
            }
            WarpError::NotPainless { .. } => {
                " (painless case needs 1/a_m >= F^-1(d+m) - F^-1(c+m))"
            }
            _ => "",
        };
        Self::new(code, format!("{err}{hint}"))
    }

    /// Maps an error met while reading a coefficient container.
    pub fn from_container(err: WarpError) -> Self {
        match err {
            WarpError::Format(msg) => {
                Self::new(EXIT_COEFFICIENTS, format!("coefficient file: {msg}"))
            }
            other => Self::from_warp(other),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<WarpError> for CliError {
    fn from(err: WarpError) -> Self {
        Self::from_warp(err)
    }
}

pub type CliResult<T> = Result<T, CliError>;
