use std::path::Path;

use thiserror::Error;

/// Exit status for usage errors and unmet preconditions.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for numerical failures (infeasible split, no convergence,
/// oracle disagreement).
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] mixquant::Error),

    #[error("{0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: Option<&Path>, source: std::io::Error) -> Self {
        let path = path.map_or_else(|| "<stdout>".to_string(), |p| p.display().to_string());
        CliError::Io { path, source }
    }

    pub fn exit_code(&self) -> i32 {
        use mixquant::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Core(E::Infeasible { .. } | E::NoConvergence { .. }) => EXIT_NUMERICAL,
            CliError::Core(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            // serializer bugs, not user errors
            CliError::Json(_) | CliError::Csv(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
