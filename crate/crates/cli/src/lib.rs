//! Command-line front end for the spectral-flow library: validation scans,
//! single-angle spectra, full-cycle flows, permutation reports and web
//! convergence studies.
//!
//! Exit codes: 0 success, 1 usage, 2 validation failure, 3 numerical
//! ambiguity (tracking or incomplete branches).

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod format;
pub mod plot;

pub use config::{resolve, Overrides, Ratio, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_AMBIGUITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "spectral-flow", version, about = "Spectral flow and eigenvalue anholonomy on a two-loop quantum graph")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// Config file of `key = value` lines; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
    #[command(flatten)]
    pub flags: Overrides,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Self-adjointness and ramp-constraint scan over the θ grid.
    Validate,
    /// Spectrum at one angle.
    Spectrum,
    /// Spectra over the full cycle, tracked branches and crossings.
    Flow,
    /// Level permutation after one cycle.
    Anholonomy,
    /// Convergence of the δ-web approximation in one sector.
    Web,
}

/// A command outcome other than success.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: String) -> Self {
        Self { code, message }
    }
}

/// Runs `cli`; the returned text is what the binary prints to stdout.
pub fn run(cli: &Cli) -> Result<String, Failure> {
    let cfg = resolve(cli.config.as_deref(), &cli.flags).map_err(|m| Failure::new(EXIT_USAGE, m))?;
    if cli.print_config {
        return Ok(cfg.to_file_text());
    }
    let Some(cmd) = cli.command else {
        return Err(Failure::new(EXIT_USAGE, "no subcommand given (validate, spectrum, flow, anholonomy, web)".into()));
    };
    run_command(cmd, &cfg)
}

/// Runs one command, inside a dedicated thread pool when `cfg.threads` is set.
pub fn run_command(cmd: Command, cfg: &RunConfig) -> Result<String, Failure> {
    let go = || match cmd {
        Command::Validate => commands::validate(cfg),
        Command::Spectrum => commands::spectrum(cfg),
        Command::Flow => commands::flow(cfg),
        Command::Anholonomy => commands::anholonomy(cfg),
        Command::Web => commands::web(cfg),
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot start {n} threads: {e}")))?
            .install(go),
        None => go(),
    }
}
