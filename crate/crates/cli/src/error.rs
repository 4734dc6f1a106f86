use std::fmt;

use lablocus_core::Error;

/// Everything that ends a command without a report. The exit code contract:
/// 2 for usage and schema problems, 3 for numeric invariant violations.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Schema { path: String, message: String },
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Schema { .. } => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Maps a library error raised while handling `at`.
    pub fn from_core(at: &str, e: Error) -> Self {
        match e {
            Error::InvalidProjectors { .. }
            | Error::NotUnitary(_)
            | Error::NotTracePreserving(_)
            | Error::TraceIncreasing(_)
            | Error::InvalidState(_)
            | Error::OutsideSector(_)
            | Error::NotNormalised(_) => CliError::Numeric(format!("{at}: {e}")),
            Error::Unsupported(_) => CliError::Usage(e.to_string()),
            _ => CliError::schema(at, e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Schema { path, message } => write!(f, "schema error at `{path}`: {message}"),
            CliError::Numeric(m) => write!(f, "numeric invariant violated: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
