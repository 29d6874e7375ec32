//! Config-driven runner for `wgqed-core`: parses a `key = value` run file,
//! evaluates the requested sweep and writes a deterministic table.

pub mod config;
pub mod output;
pub mod run;

use wgqed_core::Error as CoreError;

pub use config::{parse_config, Mode, RunConfig};
pub use run::{run, RunSummary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid config: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 for bad input or I/O, 2 for numerical degeneracy.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::SingularSite
            | CoreError::Degenerate(_)
            | CoreError::ReflectionPole
            | CoreError::UndefinedRatio { .. }
            | CoreError::Shape(_) => CliError::Numerical(err.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}
