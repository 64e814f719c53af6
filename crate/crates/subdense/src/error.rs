//! Application-level errors and the exit-code contract:
//! 0 success, 1 numerical-integrity failure, 2 capability (hypotheses
//! unmet), 3 malformed specification or invocation.

use subdense_core::{EngineError, ErrorKind};

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("malformed spec: {0}")]
    Malformed(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    /// The process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Engine(e) => match e.kind() {
                ErrorKind::Capability => 2,
                ErrorKind::ModelInvalid => 3,
                // Numerical integrity and unexpected support violations are
                // both "the engine could not deliver a trustworthy number".
                ErrorKind::NumericalIntegrity | ErrorKind::Support => 1,
            },
            AppError::Malformed(_) => 3,
            AppError::Io(_) => 1,
        }
    }
}
