use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rdhei_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("bad case: the compressed maps do not fit in the MSB plane, so this image cannot carry a message with LMR")]
    BadCase,

    #[error("round trip failed: {0}")]
    Mismatch(String),

    #[error("{0}")]
    Usage(String),

    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        use rdhei_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Core(E::InvalidKey(_)) => 2,
            CliError::Core(E::Capacity { .. }) => 3,
            CliError::Core(_) | CliError::Mismatch(_) => 4,
            CliError::BadCase => 5,
            CliError::Io { .. } | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}
