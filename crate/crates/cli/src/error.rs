use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid --set {arg:?}: {message}")]
    Override { arg: String, message: String },

    #[error("invalid {key}: {message}")]
    Validation { key: String, message: String },

    #[error(transparent)]
    Model(#[from] chirp_qkd::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.into())
    }
}

impl CliError {
    pub fn validation(key: &str, message: impl Into<String>) -> Self {
        CliError::Validation {
            key: key.to_string(),
            message: message.into(),
        }
    }

    /// 0 success, 1 I/O, 2 configuration or validation, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Override { .. } | CliError::Validation { .. } => 2,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) => 2,
            CliError::Io { .. } | CliError::Output(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
