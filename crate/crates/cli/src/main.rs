use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stripedbox::error::{CliError, EXIT_OK, EXIT_USAGE};
use stripedbox::Mode;

#[derive(Parser)]
#[command(name = "stripedbox", version, about = "Spectra, PT sweeps and densities for a striped rigid box")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues and residuals at one parameter value.
    Spectrum(Args),
    /// Branch-tracked eigenvalues over a λ range, with exceptional points.
    Sweep(Args),
    /// Probability density of one level on a grid.
    Density(Args),
    /// Cross-checks against the quadrature and direct-matching oracles.
    Validate(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Study configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Directory for output files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Override the number of y basis functions.
    #[arg(long)]
    nmax: Option<usize>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (mode, args) = match cli.command {
        Command::Spectrum(a) => (Mode::Spectrum, a),
        Command::Sweep(a) => (Mode::Sweep, a),
        Command::Density(a) => (Mode::Density, a),
        Command::Validate(a) => (Mode::Validate, a),
    };
    let result = configure_threads(args.threads)
        .and_then(|()| stripedbox::run(mode, &args.config, &args.out_dir, args.nmax));
    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            println!("{}", outcome.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Threads(e.to_string()))
}
