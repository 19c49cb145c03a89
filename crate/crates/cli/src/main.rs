//! Command-line front end for the solver: single runs, preset table
//! sweeps, residual convergence studies, and randomized verification.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Errors split by exit code: usage and configuration problems exit with
/// 2 (matching the flag-parser convention), runtime failures with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(anyhow::anyhow!(msg.into()))
    }

    pub fn usage_from(err: impl Into<anyhow::Error>) -> Self {
        CliError::Usage(err.into())
    }

    pub fn runtime_from(err: impl Into<anyhow::Error>) -> Self {
        CliError::Runtime(err.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn inner(&self) -> &anyhow::Error {
        match self {
            CliError::Usage(e) | CliError::Runtime(e) => e,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "singshock",
    version,
    about = "Operator-splitting finite-volume solver for 2x2 conservation-law \
             systems with singular and delta shocks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write profile CSVs plus a plot script.
    Run(RunArgs),
    /// Run a preset grid sweep and print the monitor table.
    Table(SweepArgs),
    /// Measure weak-form residual convergence across a preset's grids.
    Residual(ResidualArgs),
    /// Run the seeded randomized verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default)]
pub struct RunArgs {
    /// System selector: `kk`, `korchinski`, or `custom:<path>` pointing at a
    /// polynomial system JSON file.
    #[arg(long)]
    system: Option<String>,
    /// Riemann data `u_left,v_left,u_right,v_right` (jump at x = 0 unless
    /// the config sets `jump_x`).
    #[arg(long, allow_hyphen_values = true)]
    ic: Option<String>,
    /// Preset supplying defaults for system, data, domain and parameters.
    #[arg(long)]
    preset: Option<String>,
    /// Spatial domain `x_min,x_max`.
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
    /// Cell width.
    #[arg(long)]
    h: Option<f64>,
    /// Fixed step ratio r = dt/h.
    #[arg(long)]
    r: Option<f64>,
    /// Pick r from the initial data and halve it on CFL violations.
    #[arg(long)]
    auto_r: bool,
    /// Target for r * max|phi| under --auto-r (default 0.9).
    #[arg(long)]
    cfl_target: Option<f64>,
    /// Averaging weight in [0, 0.5); 0 disables the averaging stage.
    #[arg(long)]
    alpha: Option<f64>,
    /// Exponent in the velocity-growth monitor h^beta * max|phi|.
    #[arg(long)]
    beta: Option<f64>,
    /// Exponent in the flux-sum monitor h^(1+gamma) * (sum|A|, sum|B|).
    #[arg(long)]
    gamma: Option<f64>,
    /// Final time.
    #[arg(long = "T")]
    t_final: Option<f64>,
    /// Output path prefix for emitted CSV and plot files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated times at which to snapshot the profile.
    #[arg(long, allow_hyphen_values = true)]
    snapshots: Option<String>,
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct SweepArgs {
    /// Preset name (see `table --preset help` for the list).
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated row indices to run (default: all rows).
    #[arg(long)]
    rows: Option<String>,
    /// Output path prefix; writes `<out>_monitors.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct ResidualArgs {
    /// Preset name (see `residual --preset help` for the list).
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated row indices to run (default: all rows).
    #[arg(long)]
    rows: Option<String>,
    /// Output path prefix; writes `<out>_residuals.csv` and `<out>_orders.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Seed for the randomized suites; a fixed seed reproduces every case.
    #[arg(long, default_value_t = 2026)]
    seed: u64,
    /// Run reduced case counts (for smoke checks).
    #[arg(long)]
    quick: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    init_thread_pool();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {:#}", err.inner());
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => commands::run(&args),
        Command::Table(args) => commands::table(&args),
        Command::Residual(args) => commands::residual(&args),
        Command::Verify(args) => commands::verify(&args),
    }
}

/// Honors `SINGSHOCK_THREADS` as a cap on data-parallel workers. Without
/// the `parallel` feature the build is sequential and the value is moot.
fn init_thread_pool() {
    let Ok(raw) = std::env::var("SINGSHOCK_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n >= 1 => {
            #[cfg(feature = "parallel")]
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not cap worker threads at {n}: {e}");
            }
            #[cfg(not(feature = "parallel"))]
            log::debug!("sequential build; SINGSHOCK_THREADS={n} has no effect");
        }
        _ => log::warn!("ignoring SINGSHOCK_THREADS={raw:?}: expected a positive integer"),
    }
}
