//! `lle`: boundary coefficients, local spectra and identity checks for
//! Landau-level projections.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{coeff, rocca, scaling, spectrum, verify};

#[derive(Parser)]
#[command(
    name = "lle",
    version,
    about = "Local entropies of Landau-level projections"
)]
struct Cli {
    /// Worker threads. LLE_THREADS overrides; default is the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON file with parameters of the command. Flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Boundary coefficients M_ℓ(f) and M_{≤n}(f).
    Coeff(coeff::CoeffArgs),
    /// Spectrum of a localized projection.
    Spectrum(spectrum::SpectrumArgs),
    /// Trace functional against the scale L with a fitted boundary slope.
    Scaling(scaling::ScalingArgs),
    /// Randomized numerical checks of the algebraic identities.
    Verify(verify::VerifyArgs),
    /// Area of intersections with small translates against its expansion.
    Rocca(rocca::RoccaArgs),
}

/// Failure classes; each maps onto a fixed exit code.
#[derive(Debug)]
pub enum CliError {
    /// A verification ran and failed.
    Failed(String),
    /// Bad flags, configuration or input documents.
    Usage(String),
    /// Numerical or capability failure during the computation.
    Numeric(lle_core::Error),
    /// Output could not be written.
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Failed(m) => write!(f, "verification failed: {m}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<lle_core::Error> for CliError {
    fn from(e: lle_core::Error) -> Self {
        CliError::Numeric(e)
    }
}

/// Settings shared by every command.
pub struct Context {
    pub threads: usize,
    pub config: Option<PathBuf>,
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, CliError> {
    let n = match std::env::var("LLE_THREADS") {
        Ok(s) => s.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!("LLE_THREADS must be a positive integer, got `{s}`"))
        })?,
        Err(_) => match flag {
            Some(n) => n,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(CliError::Usage("thread count must be positive".into()));
    }
    Ok(n)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let threads = resolve_threads(cli.threads)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let ctx = Context {
        threads,
        config: cli.config,
    };
    match cli.command {
        Command::Coeff(a) => coeff::run(&ctx, a),
        Command::Spectrum(a) => spectrum::run(&ctx, a),
        Command::Scaling(a) => scaling::run(&ctx, a),
        Command::Verify(a) => verify::run(&ctx, a),
        Command::Rocca(a) => rocca::run(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lle: {e}");
            ExitCode::from(e.code())
        }
    }
}
