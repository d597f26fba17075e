use thiserror::Error;

use sparseperm::Error as CoreError;

/// Failures of a CLI command, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or unwritable files and malformed input data.
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    /// Bad flags, config files or parameter values.
    #[error("configuration error: {0}")]
    Config(String),

    /// The data or parameters admit no solution, or a check failed.
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, message: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Io { path, message } => CliError::Io { path, message },
            CoreError::Dimension(_)
            | CoreError::InfeasibleSparsity { .. }
            | CoreError::Range(_)
            | CoreError::Parameter(_)
            | CoreError::Domain(_)
            | CoreError::Spec(_) => CliError::Config(e.to_string()),
            CoreError::SingularDesign { .. }
            | CoreError::Budget { .. }
            | CoreError::InsufficientData(_)
            | CoreError::Infeasible(_) => CliError::Numerical(e.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
