use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use collapse_spectra::{execute, finish, Command, Format, Overrides};

/// Collapse-model line broadening: rates, Bloch simulations, spectra and scans.
#[derive(Debug, Parser)]
#[command(name = "collapse-spectra", version)]
struct Cli {
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides sim.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides output_path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let overrides = Overrides { seed: cli.seed, out: cli.out, format: cli.format };
    let mut stderr = std::io::stderr();
    let result = execute(cli.command, &cli.config, &overrides, &mut stderr);
    finish(result, &mut stderr)
}
