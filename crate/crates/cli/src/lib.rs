//! Command-line front end for `collapse-spectra-core`.
//!
//! A run is described by a strict JSON configuration, executed by
//! [`dispatch::run`] and written as CSV or JSON with an optional
//! `<out>.meta.json` summary.

pub mod config;
pub mod dispatch;
pub mod gases;
pub mod output;
pub mod parallel;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use collapse_spectra_core::Error;

pub use config::{parse_config, Command, ConfigError, Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at {0}")]
    Config(#[from] ConfigError),
    #[error("cannot read {path}: {source}")]
    ReadConfig { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Run(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for bad input, 3 for numerical failure, 1 for IO.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::ReadConfig { .. } => 2,
            CliError::Run(e) => match e {
                Error::NumericalFailure { .. }
                | Error::WindowTooShort { .. }
                | Error::Degenerate(_)
                | Error::NoPeak => 3,
                Error::InvalidParameter { .. }
                | Error::UnknownConstant(_)
                | Error::IncompatibleUnits { .. }
                | Error::Overdamped { .. }
                | Error::IncompleteSystem(_)
                | Error::RecoilRegime { .. } => 2,
            },
            CliError::Write { .. } => 1,
        }
    }
}

/// Flag overrides layered over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Loads, runs and writes one command. Warnings go to `diagnostics`.
pub fn execute(
    command: Command,
    config_path: &Path,
    overrides: &Overrides,
    diagnostics: &mut dyn std::io::Write,
) -> Result<PathBuf, CliError> {
    let text = std::fs::read(config_path)
        .map_err(|source| CliError::ReadConfig { path: config_path.to_path_buf(), source })?;
    let mut config = parse_config(&text, Some(command))?;
    if let Some(seed) = overrides.seed {
        match config.sim.as_mut() {
            Some(sim) => sim.params.seed = seed,
            None => {
                let _ = writeln!(diagnostics, "note: --seed has no effect on `{}`", command.name());
            }
        }
    }
    if let Some(format) = overrides.format {
        config.format = format;
    }
    let out = overrides.out.clone().or_else(|| config.output_path.clone()).ok_or_else(|| ConfigError {
        path: "$.output_path".into(),
        message: "no output path: set output_path or pass --out".into(),
    })?;

    let artifacts = dispatch::run(&config)?;
    for w in &artifacts.warnings {
        let _ = writeln!(diagnostics, "{w}");
    }
    output::write_artifacts(&artifacts, &out, config.format)
        .map_err(|source| CliError::Write { path: out.clone(), source })?;
    Ok(out)
}

/// Maps a run result to the process exit status, reporting errors.
pub fn finish(result: Result<PathBuf, CliError>, diagnostics: &mut dyn std::io::Write) -> ExitCode {
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(diagnostics, "error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
