//! Command-line front end: file formats and the `count`, `solve`, `verify`,
//! `change-flags` and `instance` commands.

pub mod commands;
pub mod format;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use numschubert::SchubertError;

pub use commands::run;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("invalid problem: {0}")]
    Schubert(#[from] SchubertError),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => EXIT_INCOMPLETE,
            _ => EXIT_INVALID_INPUT,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "numschubert", version, about = "Count and numerically solve Schubert problems on Grassmannians")]
pub struct Cli {
    /// Random seed; drawn from OS entropy when absent and always recorded in the output.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Incidence tolerance for verification.
    #[arg(long, global = true, default_value_t = numschubert::geometry::DEFAULT_INCIDENCE_TOL)]
    pub tol: f64,
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the number of solutions and the Littlewood-Richardson rule.
    Count { problem: PathBuf },
    /// Solve a problem (on a random instance) or an instance file.
    Solve { input: PathBuf },
    /// Check every solution against an instance.
    Verify { instance: PathBuf, solutions: PathBuf },
    /// Move solutions to another instance of the same problem.
    ChangeFlags { solutions: PathBuf, target: PathBuf },
    /// Generate a random instance of a problem.
    Instance { problem: PathBuf },
}
