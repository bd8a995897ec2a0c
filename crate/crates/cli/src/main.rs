//! `maryland-lab`: run the kicked-rotator and driven-lattice models, scan
//! for dynamic localization, and verify closed forms against the oracle.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::{Format, RunConfig, UsageError};

const THREADS_ENV: &str = "MARYLAND_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "maryland-lab", version, about = "Exact propagators for Maryland-class lattice models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kicked linear rotator: propagator, trajectory, energy and tail mass.
    Qklr(Flags),
    /// Driven lattice E(t) = -E sin t: MSD, J0 scan and propagator.
    Dunlap(Flags),
    /// Compare closed forms with the oracle and run the invariant suite.
    Verify(Flags),
    /// Scan the field amplitude for dynamic localization.
    Scan(Flags),
}

#[derive(clap::Args, Debug, Default)]
struct Flags {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Kick strength.
    #[arg(long)]
    k: Option<f64>,
    /// Kick period.
    #[arg(long)]
    tau: Option<f64>,
    /// Numerator of τ/2π.
    #[arg(long)]
    p: Option<u64>,
    /// Denominator of τ/2π.
    #[arg(long)]
    q: Option<u64>,
    /// Nearest-neighbor hopping.
    #[arg(long = "T")]
    hopping: Option<f64>,
    /// Field amplitude.
    #[arg(long = "E")]
    field: Option<f64>,
    #[arg(long)]
    periods: Option<u64>,
    #[arg(long)]
    kicks: Option<u64>,
    /// Oracle lattice dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Half-width of written propagator blocks and trajectories.
    #[arg(long)]
    window: Option<i64>,
    /// Rows/columns excluded at each side of oracle comparisons.
    #[arg(long)]
    margin: Option<usize>,
    /// Replace every verification tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    scan_lo: Option<f64>,
    #[arg(long)]
    scan_hi: Option<f64>,
    #[arg(long)]
    scan_points: Option<usize>,
    #[arg(long)]
    scan_tol: Option<f64>,
}

impl Flags {
    fn resolve(self) -> Result<RunConfig, UsageError> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            k: self.k,
            tau: self.tau,
            p: self.p,
            q: self.q,
            hopping: self.hopping,
            field: self.field,
            periods: self.periods,
            kicks: self.kicks,
            dim: self.dim,
            window: self.window,
            margin: self.margin,
            tolerance: self.tolerance,
            seed: self.seed,
            scan_lo: self.scan_lo,
            scan_hi: self.scan_hi,
            scan_points: self.scan_points,
            scan_tol: self.scan_tol,
            format: self.format,
            out: self.out,
            ..Default::default()
        };
        Ok(base.overlay(flags))
    }
}

fn configure_threads() -> Result<(), UsageError> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| UsageError(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| UsageError(format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    configure_threads()?;
    match cli.command {
        Command::Qklr(f) => commands::qklr::run(f.resolve()?),
        Command::Dunlap(f) => commands::dunlap::run(f.resolve()?),
        Command::Verify(f) => commands::verify::run(f.resolve()?),
        Command::Scan(f) => commands::scan::run(f.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(err) if err.downcast_ref::<UsageError>().is_some() => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
