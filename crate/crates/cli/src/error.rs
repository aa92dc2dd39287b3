use std::process::ExitCode;

use opf_core::OpfError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("input error: {0}")]
    Parse(String),

    /// Two presets disagreed on the frequent set of the same input.
    #[error("equivalence violation: {0}")]
    Equivalence(String),

    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// 2 config, 3 input/parse, 4 preset disagreement, 1 anything else.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Runtime(_) => 1,
            CliError::Config(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Equivalence(_) => 4,
        })
    }
}

impl From<OpfError> for CliError {
    fn from(e: OpfError) -> Self {
        if e.is_config() {
            return CliError::Config(e.to_string());
        }
        match e {
            OpfError::InvalidInput(_) => CliError::Parse(e.to_string()),
            OpfError::Series { ref source, .. }
                if matches!(**source, OpfError::InvalidInput(_)) =>
            {
                CliError::Parse(e.to_string())
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
