use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

/// One input that failed while the run continued.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub input: String,
    pub message: String,
    pub numerical: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] sas_core::Error),

    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{} of the inputs failed", failures.len())]
    Partial { failures: Vec<Failure> },
}

impl CliError {
    /// 2 for usage and configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Partial { failures } if failures.iter().any(|f| f.numerical) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) if e.is_numerical() => "numerical",
            CliError::Core(_) => "config",
            CliError::Output { .. } => "output",
            CliError::Partial { .. } => "partial",
        }
    }

    /// Machine-readable error object written to stderr.
    pub fn envelope(&self) -> Value {
        let mut error = json!({
            "kind": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        match self {
            CliError::Core(sas_core::Error::Scan { shift, t1, source }) => {
                error["shift"] = json!(shift);
                error["t1"] = json!(t1);
                error["cause"] = json!(source.to_string());
            }
            CliError::Partial { failures } => {
                error["failures"] = json!(failures);
            }
            _ => {}
        }
        json!({ "error": error })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
