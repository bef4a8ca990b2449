use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] ogtt_core::Error),
    /// Some patients failed; the rest of the run completed.
    #[error("{failed} of {total} patients failed")]
    Partial { failed: usize, total: usize },
    #[error("{failed} of {total} checks failed")]
    Checks { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Partial { .. } | CliError::Checks { .. } => 1,
            CliError::Core(_) => 1,
            CliError::Config(_) | CliError::Input { .. } | CliError::Io { .. } => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
