use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] raintensity::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}, line {line}: {reason}")]
    Input {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io { .. } => "io_error",
            CliError::Input { .. } => "input_error",
            CliError::Usage(_) => "usage_error",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            _ => EXIT_VALIDATION,
        }
    }

    pub fn envelope(&self) -> Envelope<'_> {
        Envelope {
            schema_version: crate::SCHEMA_VERSION,
            error: ErrorBody {
                code: self.code(),
                message: self.to_string(),
                exit_code: self.exit_code(),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope<'a> {
    pub schema_version: u32,
    pub error: ErrorBody<'a>,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody<'a> {
    pub code: &'a str,
    pub message: String,
    pub exit_code: u8,
}

pub type CliResult<T> = std::result::Result<T, CliError>;
