//! Batch command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration
//! error, 3 numerical non-convergence.

mod commands;
mod config;

use std::ffi::OsString;
use std::io;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::bounds::BoundsError;
use crate::numint::NumintError;
use crate::pde::PdeError;

pub use commands::{execute, write_atomic, Outcome};
pub use config::{Command, ConfigError, Format, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    CheckFailed,
    UsageError,
    NonConvergence,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::CheckFailed => 1,
            Status::UsageError => 2,
            Status::NonConvergence => 3,
        }
    }

    /// Severity order for combining row outcomes: non-convergence outranks
    /// a failed check.
    fn rank(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::CheckFailed => 1,
            Status::NonConvergence => 2,
            Status::UsageError => 3,
        }
    }

    pub fn worst(self, other: Status) -> Status {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("numerical failure: {0}")]
    NonConvergence(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Io(_) => Status::UsageError,
            CliError::Check(_) => Status::CheckFailed,
            CliError::NonConvergence(_) => Status::NonConvergence,
        }
    }
}

impl From<PdeError> for CliError {
    fn from(e: PdeError) -> Self {
        match e {
            PdeError::NotConverged { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Infeasible(_) | BoundsError::IdentityFailure { .. } => CliError::Check(e.to_string()),
            BoundsError::Unbounded | BoundsError::BudgetExhausted(_) => CliError::NonConvergence(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<NumintError> for CliError {
    fn from(e: NumintError) -> Self {
        match e {
            NumintError::Pde(e) => e.into(),
            NumintError::Bounds(e) => e.into(),
            NumintError::ToleranceNotReached { .. }
            | NumintError::DivergentTail { .. }
            | NumintError::NonFinite { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "conformal-bounds",
    version,
    about = "Exact and numerical checks of the boundary volume-expansion constants"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Subcommand, Debug)]
enum CommandArgs {
    /// Check the exact assembly, ODE and integral-chain identities.
    VerifyIdentities(Flags),
    /// Solve a profile equation and check its sub/supersolution sandwich.
    Solve(Flags),
    /// Tabulate exact bounds, signs and numeric values over a dimension range.
    Scan(Flags),
    /// Search a basis for a better certified subsolution.
    Optimize(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Configuration file of `key = value` lines; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimension.
    #[arg(long = "n")]
    n: Option<String>,
    /// Dimension range `lo..hi` (inclusive).
    #[arg(long)]
    range: Option<String>,
    /// nonumbilic or umbilic.
    #[arg(long)]
    case: Option<String>,
    /// Profile to solve: V, Lambda, u1, u2, v1, v2, w1, w2.
    #[arg(long)]
    tag: Option<String>,
    /// Nodes per direction (odd).
    #[arg(long)]
    grid: Option<String>,
    /// Outer radius of the computational box
    #[arg(long)]
    radius: Option<String>,
    /// Grid stretching parameter (0 gives a uniform grid)
    #[arg(long)]
    stretch: Option<String>,
    /// Quadrature tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// Multiplier of the convergence-based sandwich tolerance.
    #[arg(long)]
    safety: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Report format: json or csv.
    #[arg(long)]
    format: Option<String>,
    /// Seed for the optimizer's random verification samples
    #[arg(long)]
    seed: Option<String>,
    /// `;`-separated basis: `standard`, `extended`, or profile expressions.
    #[arg(long)]
    basis: Option<String>,
    /// Double the named contribution before verifying.
    #[arg(long)]
    corrupt: Option<String>,
    /// Skip numeric values in `scan`.
    #[arg(long)]
    skip_numeric: bool,
}

impl Flags {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        let mut out: Vec<(&'static str, &str)> = [
            ("n", &self.n),
            ("range", &self.range),
            ("case", &self.case),
            ("tag", &self.tag),
            ("grid", &self.grid),
            ("radius", &self.radius),
            ("stretch", &self.stretch),
            ("tol", &self.tol),
            ("safety", &self.safety),
            ("out", &self.out),
            ("format", &self.format),
            ("seed", &self.seed),
            ("basis", &self.basis),
            ("corrupt", &self.corrupt),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect();
        if self.skip_numeric {
            out.push(("numeric", "false"));
        }
        out
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let (command, flags) = match &cli.command {
        CommandArgs::VerifyIdentities(f) => (Command::VerifyIdentities, f),
        CommandArgs::Solve(f) => (Command::Solve, f),
        CommandArgs::Scan(f) => (Command::Scan, f),
        CommandArgs::Optimize(f) => (Command::Optimize, f),
    };
    let mut cfg = RunConfig::default();
    if let Some(path) = &flags.config {
        cfg.apply_file(path)?;
    }
    cfg.command = command;
    for (k, v) in flags.overrides() {
        cfg.set(k, v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::UsageError.code() } else { Status::Pass.code() };
        }
    };
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::UsageError.code();
        }
    };
    match execute(&cfg) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            outcome.status.code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.status().code()
        }
    }
}
