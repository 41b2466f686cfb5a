//! Command-line front end for `charged-drop`.
//!
//! The binary is a thin wrapper around [`run`]; everything else lives here so
//! it can be driven in-process from tests through [`run_with`].
//!
//! Subcommands:
//!
//! | command              | output                                      |
//! |----------------------|---------------------------------------------|
//! | `two solve`          | one solution record on stdout; `--profile N` |
//! |                      | adds `profile.{csv,json}` (+ `profile.svg`)  |
//! | `two sweep`          | `two_sweep.{csv,json}` in the output dir     |
//! | `two boundary`       | `boundary.{csv,json}` (+ `boundary.svg`)     |
//! | `charges optimize`   | the optimized configuration on stdout       |
//! | `charges converge`   | `uniformity.{csv,json}` (+ `uniformity.svg`) |
//! | `regime map`         | `regime_map.{csv,json}`                      |
//! | `nondim`             | `{rho, lambda, gamma}` on stdout            |
//!
//! Exit status is 0 on success, 1 when the computation itself fails (bad
//! parameter values, no bracket, I/O) and 2 for usage errors.

mod args;
mod commands;
pub mod config;
pub mod nondim;
pub mod plot;

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};

use clap::Parser;

pub use args::{Format, PlotMode};
pub use nondim::{nondimensionalize, Nondimensional, PhysicalParams};
pub use plot::{emit_plot, render_svg, PlotKind, Series};

/// Environment variable that overrides the output directory.
pub const OUT_DIR_ENV: &str = "CHARGED_DROP_OUT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Why a run failed.
#[derive(Debug)]
pub enum CliError {
    /// Bad invocation: unknown flag, missing parameter, unreadable config.
    Usage(String),
    /// The inputs were understood but the computation failed.
    Domain(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) | CliError::Io(_) => EXIT_DOMAIN,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(m) => write!(f, "error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<charged_drop::Error> for CliError {
    fn from(e: charged_drop::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<plot::PlotError> for CliError {
    fn from(e: plot::PlotError) -> Self {
        match e {
            plot::PlotError::Io(e) => CliError::Io(e),
            other => CliError::Domain(other.to_string()),
        }
    }
}

/// Runs the command line `argv` (including the program name) against the
/// process's stdout and stderr and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are successful runs
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match commands::execute(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            if let CliError::Usage(_) = e {
                let _ = writeln!(err, "Run 'charged-drop --help' for usage.");
            }
            e.exit_code()
        }
    }
}

/// The command-line chapter of the guide, compiled so its listings run as doc-tests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
