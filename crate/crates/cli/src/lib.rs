//! Command-line front end for `stripedbox-core`: TOML study configs in,
//! CSV/JSON/SVG files out.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::fs;
use std::path::Path;

pub use commands::Outcome;
pub use config::{Analysis, Mode, Study, StudyConfig};
pub use error::CliError;

pub fn load_config(path: &Path) -> Result<StudyConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    StudyConfig::parse(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads, checks and runs one study. The config's `analysis.mode` must match `command`.
pub fn run(command: Mode, config_path: &Path, out_dir: &Path, nmax: Option<usize>) -> Result<Outcome, CliError> {
    let mut config = load_config(config_path)?;
    if let Some(n) = nmax {
        config = config.with_nmax(n);
    }
    let study = config.study()?;
    if study.mode() != command {
        return Err(CliError::ModeMismatch {
            command: command.name(),
            mode: study.mode().name(),
        });
    }
    match &study.config.analysis {
        Analysis::Spectrum(p) => commands::spectrum(&study, p, out_dir),
        Analysis::Sweep(p) => commands::sweep(&study, p, out_dir),
        Analysis::Density(p) => commands::density(&study, p, out_dir),
        Analysis::Validate(p) => commands::validate(&study, p, out_dir),
    }
}
