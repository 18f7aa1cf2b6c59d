//! `spencer-mirror`: batch driver for mirror verification runs, sweeps,
//! Riemann–Roch reports and the full reproduction bundle.
//!
//! Exit codes: 0 pass, 1 configuration error, 2 verification failure,
//! 3 numeric failure.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod dump;
pub mod paper;
pub mod report;

pub const OUT_ENV: &str = "SPENCER_MIRROR_OUT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<spencer_core::Error> for CliError {
    fn from(e: spencer_core::Error) -> Self {
        match e.kind() {
            "input" | "capacity" => CliError::Config(e.to_string()),
            "consistency" => CliError::Verification(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "spencer-mirror", version, about = "Mirror-symmetry verification for discretized Spencer complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config (run config, sweep list or Riemann–Roch data, depending on the command).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Named built-in input: `k3` for riemann-roch, `simplified` or `faithful` for sweep.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Output directory; the SPENCER_MIRROR_OUT environment variable takes precedence.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write CSV dumps of the mesh, δ matrices, operators and spectra.
    #[arg(long, global = true)]
    pub dump_matrices: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Compare harmonic dimensions at λ and −λ for one config.
    VerifyMirror,
    /// Run a list of configs (default: the seven reference vectors).
    Sweep,
    /// Riemann–Roch term split for Spencer bundle data.
    RiemannRoch,
    /// Full reproduction bundle with a pass/fail summary per claim.
    Paper,
}

/// Output directory: environment override, then `--out`, then the config, then the default.
pub fn resolve_out(cli_out: Option<&PathBuf>, config_out: Option<&PathBuf>) -> PathBuf {
    if let Some(env) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(env);
    }
    cli_out
        .or(config_out)
        .cloned()
        .unwrap_or_else(|| PathBuf::from(config::DEFAULT_OUTPUT_DIR))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match cli.command {
        Command::VerifyMirror => commands::verify_mirror(cli),
        Command::Sweep => commands::sweep(cli),
        Command::RiemannRoch => commands::riemann_roch(cli),
        Command::Paper => paper::paper(cli),
    }
}
