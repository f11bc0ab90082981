use thiserror::Error;

/// Failures of the command-line layer. Exit code 2 is reserved for
/// violated invariants; everything else exits with 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("scenario parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{object}: {message}")]
    Invalid { object: String, message: String },
    #[error("{object}: {source}")]
    Core { object: String, source: sheafhist_core::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn invalid(object: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Invalid { object: object.into(), message: message.into() }
    }

    pub fn core(object: impl Into<String>, source: sheafhist_core::Error) -> Self {
        Self::Core { object: object.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Core { source: sheafhist_core::Error::Invariant(_), .. } => 2,
            _ => 1,
        }
    }
}
