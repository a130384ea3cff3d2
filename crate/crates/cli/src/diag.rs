//! Structured diagnostics written to the error stream as one JSON object.

use bergman_core::Error;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Stable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Code {
    Usage,
    AlphaOutOfRange,
    AlphaNotInteger,
    AlphaTooLarge,
    BetaOutOfRange,
    BetaInteger,
    BetaNotNegative,
    R0OutOfRange,
    XiOutsideDisk,
    GridInvalid,
    FormatUnsupported,
    NumericalFailure,
    CheckFailed,
    Io,
}

impl Code {
    pub fn exit_code(self) -> i32 {
        match self {
            Code::NumericalFailure | Code::CheckFailed => EXIT_NUMERICAL,
            Code::Io => EXIT_IO,
            _ => EXIT_VALIDATION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub level: &'static str,
    pub code: Code,
    pub message: String,
    pub exit: i32,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Self {
            level: "error",
            code,
            message: message.into(),
            exit: code.exit_code(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagnostic serializes")
    }
}

impl From<Error> for Diagnostic {
    fn from(e: Error) -> Self {
        Diagnostic::new(Code::NumericalFailure, e.to_string())
    }
}

impl From<std::io::Error> for Diagnostic {
    fn from(e: std::io::Error) -> Self {
        Diagnostic::new(Code::Io, e.to_string())
    }
}
