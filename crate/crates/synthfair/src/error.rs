use std::path::{Path, PathBuf};

use thiserror::Error;

/// Errors of the file and command layer. Each variant renders as a single
/// line starting with a distinct prefix.
#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] synthfair_core::Error),

    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("io error: {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {}: {message}", path.display())]
    Csv { path: PathBuf, message: String },

    #[error("config error: {}: {message}", path.display())]
    Config { path: PathBuf, message: String },

    #[error("argument error: {0}")]
    Usage(String),
}

pub type AppResult<T> = Result<T, AppError>;

impl AppError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        if source.kind() == std::io::ErrorKind::NotFound {
            AppError::MissingFile(path.to_path_buf())
        } else {
            AppError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    }

    pub(crate) fn config(path: &Path, message: impl ToString) -> Self {
        AppError::Config {
            path: path.to_path_buf(),
            message: single_line(&message.to_string()),
        }
    }

    /// 1 for bad input (arguments, files, schemas, data), 2 for failures
    /// while computing or writing results.
    pub fn exit_code(&self) -> i32 {
        use synthfair_core::Error as E;
        match self {
            AppError::Core(e) => match e.root() {
                E::Schema { .. }
                | E::Parse { .. }
                | E::MissingValue { .. }
                | E::Cardinality { .. }
                | E::EmptyInput
                | E::Argument(_)
                | E::DimensionMismatch { .. } => 1,
                _ => 2,
            },
            AppError::MissingFile(_) | AppError::Csv { .. } | AppError::Config { .. } | AppError::Usage(_) => 1,
            AppError::Io { .. } => 2,
        }
    }
}

pub(crate) fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
