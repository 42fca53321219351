//! Datum files, reports and the commands behind the `k3gon` binary.

use thiserror::Error;

use k3gon::classifier::ClassifyError;
use k3gon::decomposition::DecompositionError;
use k3gon::enumeration::EnumError;
use k3gon::linear_system::DatumError;

pub mod commands;
pub mod input;
pub mod render;
pub mod report;

pub const TOOL_VERSION: &str = concat!("k3gon ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    InvalidDatum(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    /// 0 ok, 1 invalid datum, 2 budget exceeded, 64 usage, 70 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidDatum(_) => 1,
            CliError::Budget(_) => 2,
            CliError::Usage(_) => 64,
            CliError::Internal(_) => 70,
        }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::InvalidDatum(e.to_string()),
        }
    }
}

impl From<DatumError> for CliError {
    fn from(e: DatumError) -> Self {
        match e {
            DatumError::Search(inner) => inner.into(),
            other => CliError::InvalidDatum(other.to_string()),
        }
    }
}

impl From<DecompositionError> for CliError {
    fn from(e: DecompositionError) -> Self {
        match e {
            DecompositionError::Search(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Search(inner) => inner.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}
