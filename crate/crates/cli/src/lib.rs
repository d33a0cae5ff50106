//! Command-line frontend for `cesnet-core`.
//!
//! [`run`] parses arguments, merges them with an optional flat TOML config
//! file (flags win over the file, the file over built-in defaults), executes
//! one subcommand and returns the process exit code: 0 on success, 1 on a
//! domain error (reported as JSON on stderr), 2 on a usage error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
mod config;
mod experiment;
mod input;

pub use config::KEYS as CONFIG_KEYS;

/// Seed used when neither `--seed` nor the config file sets one.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "cesnet",
    version,
    about = "CES production-network equilibrium and aggregation toolkit"
)]
pub struct Cli {
    /// Flat TOML file with default values for any flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory for output files (created if missing).
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Worker threads for sample evaluation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Format of the result printed on stdout.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args, Default)]
pub struct EconomyArgs {
    /// Input-output table CSV.
    #[arg(long)]
    pub economy: Option<PathBuf>,
    /// Elasticity CSV (`label,sigma`).
    #[arg(long)]
    pub elasticities: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct SolverArgs {
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<u64>,
    /// Price of the primary factor.
    #[arg(long)]
    pub numeraire: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct HouseholdArgs {
    /// Expenditure weights CSV (`label,mu`); uniform when omitted.
    #[arg(long)]
    pub prefs: Option<PathBuf>,
    /// Household utility exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct ShockArgs {
    #[arg(long)]
    pub count: Option<u64>,
    /// Standard deviation of each log shock.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Mean of each log shock.
    #[arg(long, allow_hyphen_values = true)]
    pub mean: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve equilibrium prices for one shock vector.
    Solve {
        #[command(flatten)]
        economy: EconomyArgs,
        /// Shock CSV (`label,z`); no shock when omitted.
        #[arg(long)]
        shocks: Option<PathBuf>,
        /// general_ces, leontief, cobb_douglas or uniform_ces.
        #[arg(long)]
        method: Option<String>,
        /// Common exponent for uniform_ces.
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<f64>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Equilibrium input-output and cost-share matrices.
    Structure {
        #[command(flatten)]
        economy: EconomyArgs,
        #[arg(long)]
        shocks: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Real GDP growth for one shock vector.
    Aggregate {
        #[command(flatten)]
        economy: EconomyArgs,
        #[arg(long)]
        shocks: Option<PathBuf>,
        #[arg(long)]
        method: Option<String>,
        #[command(flatten)]
        household: HouseholdArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Monte Carlo distribution of real GDP growth.
    Simulate {
        #[command(flatten)]
        economy: EconomyArgs,
        #[arg(long)]
        method: Option<String>,
        #[command(flatten)]
        household: HouseholdArgs,
        #[command(flatten)]
        shock: ShockArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Normal QQ points of a sample column.
    Qq {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Column name; `ln_h` or the first column by default.
        #[arg(long)]
        column: Option<String>,
    },
    /// Hodrick-Prescott trend and cycle of a series column.
    Hp {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        column: Option<String>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Drift, volatility and normality of each series column.
    Gbm {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Significance level of the normality verdict.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Fixed-effects or IV estimation of a CES exponent from a share panel.
    Estimate {
        /// Long panel CSV `entity,period,share,price[,instruments...]`.
        #[arg(long)]
        panel: Option<PathBuf>,
        /// Instrument list, e.g. `l1,2`.
        #[arg(long)]
        iv: Option<String>,
        /// ls or iv; iv whenever instruments are given.
        #[arg(long)]
        method: Option<String>,
        /// gamma (production) or kappa (household).
        #[arg(long)]
        role: Option<String>,
        /// Output price CSV (`period,price`) for productivity recovery.
        #[arg(long)]
        output_prices: Option<PathBuf>,
    },
    /// Paired Cobb-Douglas, Leontief and general CES simulations.
    Experiment {
        #[command(flatten)]
        economy: EconomyArgs,
        #[command(flatten)]
        household: HouseholdArgs,
        #[command(flatten)]
        shock: ShockArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

/// Outcome of a failed run.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain { kind: String, message: String },
}

impl From<cesnet_core::Error> for Failure {
    fn from(e: cesnet_core::Error) -> Self {
        Failure::Domain {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

impl Failure {
    pub(crate) fn domain(kind: &str, message: impl Into<String>) -> Self {
        Failure::Domain {
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(e: std::io::Error, what: &std::path::Path) -> Self {
        Failure::domain("Io", format!("{}: {e}", what.display()))
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: &'a str,
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Domain { kind, message }) => {
            let report = ErrorReport {
                error: &kind,
                message: &message,
            };
            eprintln!(
                "{}",
                serde_json::to_string(&report).expect("error report serializes")
            );
            1
        }
    }
}
