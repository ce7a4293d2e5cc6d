//! Command-line front end for `sparse_map`: JSON instance files, trace CSV,
//! certificate and run reports, the worked example and the benchmark.

use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

pub mod args;
pub mod bench;
pub mod commands;
pub mod example;
pub mod instance_file;
pub mod json;
pub mod report;

pub use instance_file::InstanceFile;

/// Fraction of the certified radius at which generated runs start.
pub const BASIN_FRACTION: f64 = 0.99;
/// Slack allowed between the observed rate and the certified bound.
pub const RATE_SLACK: f64 = 1e-6;
/// Slack allowed above the distance envelope.
pub const ENVELOPE_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent input (exit code 1).
    #[error("{0}")]
    Input(String),
    /// The computation ran but did not converge or failed a check (exit code 2).
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

pub fn run(cli: args::Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        args::Command::Solve(a) => commands::solve(&a, out),
        args::Command::Certify(a) => commands::certify(&a, out),
        args::Command::Example(a) => example::run(&a, out),
        args::Command::Gen(a) => commands::gen(&a, out),
        args::Command::Bench(a) => bench::run(&a, out),
    }
}

/// Writes `text` to `path`, or to `out` when no path is given.
pub(crate) fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}
