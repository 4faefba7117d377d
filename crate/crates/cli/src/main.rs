//! `polypulse`: pulse design, error-map analysis and exact simulation of
//! polychromatic Mølmer-Sørensen gates.
//!
//! Exit status: 0 on success, 2 for invalid usage, 3 when a numerical
//! validity check fails (leakage, projection residual, integration), 1 for
//! anything else.

mod args;
mod commands;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::*;
use crate::error::{CliError, CliResult};

const THREADS_VAR: &str = "POLYPULSE_THREADS";

#[derive(Parser, Debug)]
#[command(name = "polypulse", version, about)]
#[command(after_help = "Rates are given in units of δ = mω unless --rate-units omega is passed. \
Set POLYPULSE_THREADS to cap the worker threads used by sweeps.")]
struct Cli {
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal (or monochromatic) pulse amplitudes.
    Design(DesignArgs),
    /// Bus-mode displacement f(t) and phase g(t) over one period.
    Trajectory(TrajectoryArgs),
    /// First-order error matrix ζ.
    Zeta(ZetaArgs),
    /// Improvement ratio R = I_mono / I_poly over a grid.
    Sweep(SweepArgs),
    /// One exact master-equation run.
    Simulate(SimulateArgs),
    /// Entanglement-of-formation improvement R_E from exact runs.
    CompareEof(CompareEofArgs),
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Other(e.to_string()))
}

fn run(cli: &Cli) -> CliResult<()> {
    configure_threads()?;
    let text = match &cli.command {
        Command::Design(a) => design(a)?,
        Command::Trajectory(a) => trajectory(a)?,
        Command::Zeta(a) => zeta(a)?,
        Command::Sweep(a) => sweep(a)?,
        Command::Simulate(a) => simulate(a)?,
        Command::CompareEof(a) => compare_eof(a)?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Other(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
