//! `geodiv`: canonical divergences and complexity measures from the command line.

mod commands;
mod error;
mod report;
mod selftest;
mod state;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "geodiv", version, about = "Canonical divergences and complexity measures")]
struct Cli {
    /// Omit the timestamp field from reports.
    #[arg(long, global = true)]
    no_timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Divergence between two states.
    Divergence(DivergenceArgs),
    /// Distance from a family of interaction-restricted reference states.
    Complexity(ComplexityArgs),
    /// Run the oracle-equivalence suites.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DivergenceKind {
    Kl,
    Canonical,
    Dual,
    Qre,
    CanonicalQ,
    DualQ,
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    #[arg(long, value_enum)]
    kind: DivergenceKind,
    /// First state file.
    #[arg(long)]
    a: PathBuf,
    /// Second state file.
    #[arg(long)]
    b: PathBuf,
    /// Quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Gauss-Legendre points per interval.
    #[arg(long)]
    points: Option<usize>,
    /// Also report the closed-form counterpart and the absolute error.
    #[arg(long)]
    compare_oracle: bool,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    /// Joint distribution against a marginal family.
    #[arg(long, conflicts_with = "quantum", required_unless_present = "quantum")]
    classical: bool,
    /// Multi-qubit state against the k-local Gibbs family.
    #[arg(long)]
    quantum: bool,
    #[arg(long)]
    state: PathBuf,
    /// `singletons`, `pairs`, `full`, or `subsets FILE`.
    #[arg(long, num_args = 1..=2, value_names = ["FAMILY", "FILE"])]
    family: Vec<String>,
    /// Locality of the Gibbs family.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Report values in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cases per suite; defaults to each suite's own count.
    #[arg(long)]
    trials: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GEODIV_LOG", "error")).init();
    let cli = Cli::parse();
    let stamp = !cli.no_timestamp;
    let outcome = match cli.command {
        Command::Divergence(args) => commands::divergence(&args, stamp),
        Command::Complexity(args) => commands::complexity(&args, stamp),
        Command::Selftest(args) => Ok(commands::selftest(&args)),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("geodiv: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

impl DivergenceKind {
    fn name(self) -> &'static str {
        match self {
            DivergenceKind::Kl => "kl",
            DivergenceKind::Canonical => "canonical",
            DivergenceKind::Dual => "dual",
            DivergenceKind::Qre => "qre",
            DivergenceKind::CanonicalQ => "canonical-q",
            DivergenceKind::DualQ => "dual-q",
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
