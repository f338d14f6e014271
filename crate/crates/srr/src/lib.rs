//! Command-line front end for `srr-core`: JSON and CSV input/output, the
//! `srr` subcommands, and figure reproduction.
//!
//! Exit codes: 0 success, 1 validation error, 2 negative answer to a yes/no
//! query, 64 usage error (including an unknown subcommand), 65 malformed JSON.

pub mod cli;
pub mod formats;
pub mod reproduce;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_NO: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_BAD_JSON: u8 = 65;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Json(_) => EXIT_BAD_JSON,
            CliError::Invalid(_) | CliError::Io { .. } => EXIT_INVALID,
        }
    }
}
