use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config file {path}: line {line}: {message}")]
    ConfigFile {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Numerical(#[from] qutrit_dfs::Error),

    #[error("validation failed: {}", .0.join(", "))]
    Validation(Vec<String>),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 0 ok, 1 validation failure, 2 usage or configuration, 3 numerical invariant.
    pub fn exit_code(&self) -> i32 {
        use qutrit_dfs::Error as E;
        match self {
            CliError::Validation(_) => 1,
            CliError::Usage(_) | CliError::ConfigFile { .. } | CliError::Io { .. } => 2,
            CliError::Numerical(e) => match e {
                E::InvalidParameter(_)
                | E::TooManyQutrits { .. }
                | E::DimensionMismatch(_)
                | E::InvalidFactor { .. } => 2,
                _ => 3,
            },
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
