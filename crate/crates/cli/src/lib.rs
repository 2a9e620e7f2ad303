//! The `ncphase` command-line tool.
//!
//! Exit codes: `0` success, `1` the state or computation violates a physical
//! bound, `2` invalid input.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, Result};
use report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "ncphase",
    version,
    about = "Noncommutative phase-space toolkit"
)]
pub struct Cli {
    /// Numerical tolerance.
    #[arg(long, global = true, env = "NCPHASE_TOL", default_value_t = ncphase_core::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a covariance document: Robertson–Schrödinger PSD test, spectrum, capacity.
    Check { file: PathBuf },
    /// Build a Darboux map onto the deformed form.
    Darboux(DarbouxArgs),
    /// Symplectic spectrum and Williamson normal form.
    Williamson { file: PathBuf },
    /// Linear symplectic capacities and their bounds.
    Capacity { file: PathBuf },
    /// Wigner function, moments and bounds for a Fock state of the isotropic oscillator.
    Oscillator(OscillatorArgs),
}

#[derive(Debug, Args)]
pub struct DarbouxArgs {
    #[arg(long)]
    pub hbar: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: f64,
    /// Deformation scale; without it the oscillator algebra (`eta = -theta`) is assumed.
    #[arg(long)]
    pub g: Option<f64>,
    /// Free scale of the block family.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub a: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OscillatorArgs {
    #[arg(long, default_value_t = 0)]
    pub n1: u32,
    #[arg(long, default_value_t = 0)]
    pub n2: u32,
    #[arg(long = "m-omega")]
    pub m_omega: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
    pub theta: f64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Grid half-width in units of each axis' length scale.
    #[arg(long, default_value_t = 3.0)]
    pub extent: f64,
    /// Two-dimensional slice: q1p1, q2p2, q1q2 or p1p2.
    #[arg(long, default_value = "q1p1", conflicts_with = "full")]
    pub slice: String,
    /// Sample the full four-dimensional grid.
    #[arg(long)]
    pub full: bool,
    /// Values of the fixed axes as q1,q2,p1,p2.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub base: Option<Vec<f64>>,
    /// Write the grid as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match commands::dispatch(&cli) {
        Ok(outcome) => {
            let text = report::render(&outcome.report, cli.format);
            if let Some(path) = outcome.report_path {
                if let Err(e) = std::fs::write(&path, text) {
                    let err = CliError::Write {
                        path,
                        message: e.to_string(),
                    };
                    eprintln!("error: {err}");
                    return err.exit_code();
                }
            } else {
                print!("{text}");
            }
            outcome.exit_code
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
