use std::path::{Path, PathBuf};

use subsetbench_core::Error;

pub const EXIT_IO: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_UNDEFINED_ER: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::UndefinedErrorReduction { .. }) => EXIT_UNDEFINED_ER,
            CliError::Core(Error::Io { .. }) | CliError::Io { .. } => EXIT_IO,
            CliError::Core(_) | CliError::Usage(_) => EXIT_INPUT,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
