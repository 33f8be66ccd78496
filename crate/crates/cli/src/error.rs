//! CLI error type with the process exit-code contract:
//! 1 = verification failed, 2 = malformed input, 3 = internal cross-check
//! failure.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Malformed(String),
    #[error("{0}")]
    Verification(String),
    #[error("internal cross-check failure: {0}")]
    CrossCheck(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Malformed(_) => 2,
            CliError::CrossCheck(_) => 3,
        }
    }
}

impl From<qmt_core::Error> for CliError {
    fn from(e: qmt_core::Error) -> Self {
        use qmt_core::Error::*;
        match e {
            FormulaMismatch { .. } | SandwichViolation { .. } => CliError::CrossCheck(e.to_string()),
            DimensionMismatch { .. } | NotClassical { .. } | SelfLoop { .. } => {
                CliError::Malformed(e.to_string())
            }
            _ => CliError::Verification(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Malformed(format!("io error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Malformed(format!("json error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
