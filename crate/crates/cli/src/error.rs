use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

/// Errors surfaced to the user, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed flags, grids or config files.
    #[error("{0}")]
    Usage(String),

    /// Well-formed input outside the model's domain.
    #[error("{0}")]
    Domain(String),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<fair_noma::Error> for CliError {
    fn from(e: fair_noma::Error) -> Self {
        match e {
            fair_noma::Error::Config(msg) => CliError::Usage(msg),
            other => CliError::Domain(other.to_string()),
        }
    }
}
