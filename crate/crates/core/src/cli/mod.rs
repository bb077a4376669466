//! Command-line harness.
//!
//! Every run is a pure function of its parsed arguments. A `--config FILE`
//! holding `key = value` lines is expanded into flags placed directly after the
//! subcommand, so any flag repeated on the command line wins.

mod args;
mod commands;
mod config;
mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;

pub use args::{DomainArgs, DomainChoice, GridArgs, VariantChoice};
pub use commands::{BoundsArgs, ConstantsArgs, RootsArgs, SolveArgs};
pub use sweep::{SweepArgs, SweepParameter};
pub use verify::{Check, Suite, SuiteReport, VerifyArgs};

/// Exit status for malformed or inadmissible input.
pub const EXIT_USAGE: i32 = 1;
/// Exit status for numerical failures, I/O errors and failed verification.
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "loglap", version, about = "Dirichlet eigenvalues of the logarithmic Laplacian")]
pub struct Cli {
    /// Flat `key = value` file whose keys mirror the long flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Print the dimension constants.
    Constants(ConstantsArgs),
    /// Solve one of the scalar root problems.
    Roots(RootsArgs),
    /// Evaluate every applicable eigenvalue bound for a domain.
    Bounds(BoundsArgs),
    /// Assemble and solve the Galerkin eigenproblem.
    Solve(SolveArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Tabulate bounds over a parameter range.
    Sweep(SweepArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(io::Error),
    /// The run finished but its checks did not pass.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_numerical() => EXIT_FAILURE,
            CliError::Core(_) => EXIT_USAGE,
            CliError::Io(_) | CliError::Failed(_) => EXIT_FAILURE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv` (program name first), runs the command and returns the exit status.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::expand(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(&cli.command, out, err) {
        Ok(()) => 0,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Constants(a) => commands::constants(a, out),
        Command::Roots(a) => commands::roots(a, out),
        Command::Bounds(a) => commands::bounds(a, out, err),
        Command::Solve(a) => commands::solve(a, out, err),
        Command::Verify(a) => verify::command(a, out),
        Command::Sweep(a) => sweep::command(a, out, err),
    }
}

/// Writes `text` to `path` when given, otherwise to `out`.
fn emit(path: Option<&std::path::Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}
