use std::path::{Path, PathBuf};

use thiserror::Error;

/// Failures of a subcommand, each mapped to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Empty(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn schema(path: &Path, err: impl std::fmt::Display) -> Self {
        Self::Schema(format!("{}: {err}", path.display()))
    }

    /// 1 when a command ran but had nothing to report, 2 for I/O and schema
    /// problems.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Empty(_) => 1,
            Self::Io { .. } | Self::Schema(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
