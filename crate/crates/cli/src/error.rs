use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Success = 0,
    Failure = 1,
    Parse = 3,
    NoConvergence = 4,
    InfeasibleBaseline = 5,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] skycell::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("invalid manifest {path}: {reason}")]
    Manifest { path: PathBuf, reason: String },
    #[error("baseline not applicable: {0}")]
    Baseline(String),
    #[error("{failed} of {total} runs did not converge")]
    SweepNoConvergence { failed: usize, total: usize },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use skycell::Error as E;
        match self {
            CliError::Core(E::Parse(_) | E::InvalidScenario(_)) => ExitCode::Parse,
            CliError::Core(E::NoConvergence { .. }) => ExitCode::NoConvergence,
            CliError::Core(E::InfeasiblePacking(_)) => ExitCode::InfeasibleBaseline,
            CliError::Json { .. } | CliError::Manifest { .. } => ExitCode::Parse,
            CliError::Baseline(_) => ExitCode::InfeasibleBaseline,
            CliError::SweepNoConvergence { .. } => ExitCode::NoConvergence,
            _ => ExitCode::Failure,
        }
    }
}

pub(crate) trait IoContext<T> {
    fn at(self, path: &std::path::Path) -> Result<T, CliError>;
}

impl<T> IoContext<T> for std::io::Result<T> {
    fn at(self, path: &std::path::Path) -> Result<T, CliError> {
        self.map_err(|source| CliError::Io { path: path.to_path_buf(), source })
    }
}
