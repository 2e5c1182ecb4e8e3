//! Command-line front end: configuration files, the `spectrum`, `evolve`,
//! `sweep`, and `list-scenarios` commands, and bit-stable CSV/JSON output.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 partial sweep (some cells failed but the tables were written).

mod commands;
mod config;
mod output;

pub use commands::{cmd_evolve, cmd_spectrum, cmd_sweep, list_scenarios, scenario_config};
pub use config::{FileConfig, RunConfig};
pub use output::format_sig;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the CLI, each mapping to a documented exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("partial sweep: {failed} cells failed (tables were still written)")]
    PartialSweep { failed: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::PartialSweep { .. } => 4,
        }
    }
}

impl From<crate::experiments::ExperimentsError> for CliError {
    fn from(e: crate::experiments::ExperimentsError) -> Self {
        use crate::experiments::ExperimentsError as E;
        match e {
            E::UnknownScenario(_)
            | E::InvalidOverride(_)
            | E::InvalidGrid(_)
            | E::AxisMismatch(_)
            | E::Lindblad(_) => CliError::Config(e.to_string()),
            E::Floquet(_) | E::Analysis(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<crate::floquet::FloquetError> for CliError {
    fn from(e: crate::floquet::FloquetError) -> Self {
        match e {
            crate::floquet::FloquetError::InvalidInput(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<crate::analysis::AnalysisError> for CliError {
    fn from(e: crate::analysis::AnalysisError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<crate::lindblad::LindbladError> for CliError {
    fn from(e: crate::lindblad::LindbladError) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Floquet Liouvillian simulator for a periodically driven dissipative qubit.
#[derive(Debug, Parser)]
#[command(name = "floquet-qubit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan the effective Floquet spectrum over drive periods and locate
    /// exceptional points (writes spectrum.csv, eps.json).
    Spectrum(RunArgs),
    /// Evolve micromotion and stroboscopic series, optionally with transient
    /// fits (writes micromotion.csv, stroboscopic*.csv, fits.json).
    Evolve(RunArgs),
    /// Sweep the NESS over (period, starting phase) in both directions
    /// (writes ness_ccw.csv, ness_cw.csv, chirality.csv,
    /// static_reference.csv, manifest.json).
    Sweep(RunArgs),
    /// Print the registered scenarios.
    ListScenarios,
}

/// Flags shared by the run commands. Flags override config-file values,
/// which override scenario defaults.
#[derive(Debug, Args, Default, Clone)]
pub struct RunArgs {
    /// TOML configuration file; all keys optional, unknown keys rejected.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Registered scenario supplying defaults (see list-scenarios).
    #[arg(long)]
    pub scenario: Option<String>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps and scans; 0 means all cores.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Seed for stochastic sampling; echoed into the manifest.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Integration tolerance for the slice-doubling control.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Repeatable key=value parameter override (e.g. --override period=0.3).
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

/// Parse argv, run the requested command, and return the process exit code.
pub fn main_entry<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; usage problems are config errors
            // unless the user asked for help/version.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Spectrum(args) => RunConfig::resolve(&args).and_then(|cfg| cmd_spectrum(&cfg)),
        Command::Evolve(args) => RunConfig::resolve(&args).and_then(|cfg| cmd_evolve(&cfg)),
        Command::Sweep(args) => RunConfig::resolve(&args).and_then(|cfg| cmd_sweep(&cfg)),
        Command::ListScenarios => {
            list_scenarios(&mut std::io::stdout()).map_err(CliError::from)
        }
    };
    match result {
        Ok(()) => 0,
        // A closed stdout (e.g. piping into `head`) is not a failure.
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
