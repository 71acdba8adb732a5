//! Command-line front end. Settings resolve as flags, then `THP_*`
//! environment variables, then a JSON config file, then defaults.

mod commands;
mod config;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{parse_grid, ConfigFile, RunConfig};
pub use verify::{run_suite, Check, Report, Suite};

use crate::chaos::Distribution;
use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "thp", version, about = "Tempered Hermite process toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate rescaled discrete-chaos paths.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Record wall time in the manifest (makes outputs run-dependent).
        #[arg(long)]
        record_timing: bool,
    },
    /// Tabulate the covariance on a time grid.
    Covariance {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a verification suite and emit a JSON report.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, env = "THP_SUITE")]
        suite: Suite,
    },
    /// Special-function utilities.
    Specfun {
        #[command(subcommand)]
        action: SpecfunCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Gamma,
    LnGamma,
    BesselK,
    BesselKScaled,
    TemperedProductIntegral,
}

#[derive(Debug, Subcommand)]
pub enum SpecfunCommand {
    /// Evaluate one special function.
    Eval {
        #[arg(long = "fn", value_enum)]
        function: Function,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<f64>,
        #[arg(long)]
        z: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
        /// Also evaluate the independent reference implementation.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Default)]
pub struct CommonArgs {
    #[arg(long, env = "THP_K")]
    pub k: Option<u32>,
    #[arg(long, env = "THP_HURST", allow_hyphen_values = true)]
    pub hurst: Option<f64>,
    #[arg(long, env = "THP_LAMBDA", allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long = "N", env = "THP_N")]
    pub n: Option<usize>,
    #[arg(long, env = "THP_PATHS")]
    pub paths: Option<usize>,
    #[arg(long, env = "THP_SEED")]
    pub seed: Option<u64>,
    #[arg(long, env = "THP_DIST", value_parser = parse_dist)]
    pub dist: Option<Distribution>,
    /// Comma-separated times, or `start:stop:count`.
    #[arg(long, env = "THP_GRID")]
    pub grid: Option<String>,
    #[arg(long, env = "THP_TOL")]
    pub tol: Option<f64>,
    #[arg(long = "tail-tol", env = "THP_TAIL_TOL")]
    pub tail_tol: Option<f64>,
    /// Worker threads (0 = all cores). Outputs do not depend on it.
    #[arg(long, env = "THP_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, env = "THP_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, env = "THP_FORMAT")]
    pub format: Option<Format>,
    /// Cross-check against the slow reference implementations.
    #[arg(long, env = "THP_ORACLE")]
    pub oracle: bool,
    /// JSON file with the same keys as the flags.
    #[arg(long, env = "THP_CONFIG")]
    pub config: Option<PathBuf>,
}

fn parse_dist(s: &str) -> std::result::Result<Distribution, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Exit status for a finished command.
pub fn exit_code(result: &Result<bool>) -> i32 {
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) if e.is_validation() => 2,
        Err(_) => 1,
    }
}

/// Runs a parsed command. `Ok(false)` means the command ran but reported a
/// failure (a failed verification check, a non-converged table cell).
pub fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate { common, record_timing } => {
            let cfg = RunConfig::resolve(&common)?;
            cfg.in_pool(|| commands::simulate(&cfg, record_timing))
        }
        Command::Covariance { common } => {
            let cfg = RunConfig::resolve(&common)?;
            cfg.in_pool(|| commands::covariance(&cfg))
        }
        Command::Verify { common, suite } => {
            let cfg = RunConfig::resolve(&common)?;
            cfg.in_pool(|| commands::verify(&cfg, suite))
        }
        Command::Specfun {
            action:
                SpecfunCommand::Eval {
                    function,
                    x,
                    nu,
                    z,
                    beta,
                    mu,
                    oracle,
                    tol,
                },
        } => commands::specfun_eval(function, commands::SpecfunArgs { x, nu, z, beta, mu }, oracle, tol),
    }
}

/// Parses `args`, runs the command, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = dispatch(cli);
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    exit_code(&result)
}
