use std::path::PathBuf;

use geoik_core::IkFailure;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error ({context}): {msg}")]
    Parse { context: String, msg: String },
    #[error("invalid {field}: {msg}")]
    Validation { field: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("waypoint {index} unreachable: {failure}")]
    UnreachableWaypoint { index: usize, failure: IkFailure },
    #[error("solver: {0}")]
    Solver(IkFailure),
}

impl HarnessError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 usage, 2 bad input, 3 solver failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 1,
            HarnessError::Parse { .. }
            | HarnessError::Validation { .. }
            | HarnessError::Io { .. }
            | HarnessError::Csv(_) => 2,
            HarnessError::UnreachableWaypoint { .. } | HarnessError::Solver(_) => 3,
        }
    }
}
