use std::process::ExitCode;

use sscov_core::Error as CoreError;
use sscov_sim::SimError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed flags, config files or input values.
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    SizeLimit(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::SizeLimit(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Other(_) => 1,
        })
    }

    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config error",
            CliError::SizeLimit(_) => "size limit",
            CliError::Numerical(_) => "numerical contract",
            CliError::Other(_) => "error",
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::SizeLimit { .. } => CliError::SizeLimit(msg),
            CoreError::InvalidInput(_) => CliError::Config(msg),
            CoreError::NumericalContract(_) => CliError::Numerical(msg),
            CoreError::Domain(_) => CliError::Other(msg),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        let msg = e.to_string();
        match e {
            SimError::InvalidConfig(_) => CliError::Config(msg),
            SimError::CostGuard { .. } => CliError::SizeLimit(msg),
            SimError::NotSymmetric(_) | SimError::Numerical(_) => CliError::Numerical(msg),
            SimError::Io { .. } => CliError::Other(msg),
            SimError::Core(c) => c.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
