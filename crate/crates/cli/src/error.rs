use std::io;
use std::path::PathBuf;

use stripedbox_core::quadrature::QuadratureError;
use stripedbox_core::validation::ValidationError;
use stripedbox_core::{ModelError, SolveError, SweepError, WavefunctionError};
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("invalid config {}: {source}", path.display())]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("invalid config: {0}")]
    Model(#[from] ModelError),
    #[error("command `{command}` does not match config mode `{mode}`")]
    ModeMismatch { command: &'static str, mode: &'static str },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("cannot start thread pool: {0}")]
    Threads(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Wavefunction(#[from] WavefunctionError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("validation failed: {0}")]
    ChecksFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. }
            | CliError::Parse { .. }
            | CliError::Config(_)
            | CliError::Model(_)
            | CliError::ModeMismatch { .. }
            | CliError::Write { .. }
            | CliError::Threads(_) => EXIT_USAGE,
            CliError::Sweep(SweepError::Model(_) | SweepError::InvalidRange { .. } | SweepError::TooFewSteps { .. }) => {
                EXIT_USAGE
            }
            CliError::Wavefunction(WavefunctionError::LevelOutOfRange { .. } | WavefunctionError::GridTooSmall { .. }) => {
                EXIT_USAGE
            }
            CliError::Validation(ValidationError::NonRealPotential { .. } | ValidationError::InvalidTolerance { .. }) => {
                EXIT_USAGE
            }
            CliError::ChecksFailed(_) => EXIT_VALIDATION,
            _ => EXIT_NUMERICAL,
        }
    }
}
