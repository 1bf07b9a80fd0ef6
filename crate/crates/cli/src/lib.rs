//! `btbs` command-line tool: decompose state files into binary trees of
//! Bloch spheres, render them as SVG, generate demo datasets and serve the
//! decomposition over HTTP.

use std::ffi::OsString;
use std::fmt;

use clap::Parser;

mod cli;
mod commands;
pub mod serve;

pub use cli::{Cli, Command, DemoKind};

/// Exit status for malformed invocations.
pub const EXIT_USAGE: i32 = 1;
/// Exit status for bad input data or I/O failures.
pub const EXIT_DATA: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(btbs_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) | CliError::Io(_) => EXIT_DATA,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Data(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<btbs_core::Error> for CliError {
    fn from(e: btbs_core::Error) -> Self {
        CliError::Data(e)
    }
}

/// Parses `argv` and runs the selected subcommand, returning the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match commands::execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
