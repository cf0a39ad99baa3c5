//! Crate-wide error type.
//!
//! Every error renders as a single line `module: message` so that callers
//! (in particular the CLI) can emit machine-parseable diagnostics. The
//! `kind` distinguishes bad input from legitimate runtime failures such as
//! search caps or disconnected queries.

/// Coarse classification used by callers to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Invalid argument, malformed input, or a precondition violation.
    Validation,
    /// A computation that started from valid input could not finish.
    Runtime,
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{module}: {message}")]
pub struct Error {
    pub module: &'static str,
    pub kind: ErrorKind,
    pub message: String,
}

impl Error {
    pub fn validation(module: &'static str, message: impl Into<String>) -> Self {
        Error {
            module,
            kind: ErrorKind::Validation,
            message: message.into(),
        }
    }

    pub fn runtime(module: &'static str, message: impl Into<String>) -> Self {
        Error {
            module,
            kind: ErrorKind::Runtime,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
