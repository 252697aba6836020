use std::path::PathBuf;

use thiserror::Error;

/// Errors produced while loading scenarios, validating inputs or writing artifacts.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed scenario file: {0}")]
    Parse(String),
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("dimension mismatch: expected {expected} joints, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("joint index {index} out of range 1..={dof}")]
    JointIndex { index: usize, dof: usize },
    #[error("start in collision")]
    StartInCollision,
    #[error("goal in collision")]
    GoalInCollision,
    #[error("{which} configuration outside joint limits")]
    OutOfLimits { which: &'static str },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("broken parent chain while reconstructing path")]
    BrokenParentChain,
    #[error("{0}")]
    Unsupported(String),
    #[error("failed to write output: {0}")]
    Output(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
