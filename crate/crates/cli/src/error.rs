use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] eedesign_core::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 0 is success; 1 internal or I/O, 2 parse or usage, 3 infeasible,
    /// 4 invalid parameter.
    pub fn exit_code(&self) -> i32 {
        use eedesign_core::Error as E;
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Core(E::Infeasible(_) | E::EmptyFeasibleSet) => 3,
            CliError::Core(E::InvalidParameter(_)) => 4,
            _ => 1,
        }
    }
}
