//! `hardy`: batch front end for the Hardy-space toolkit.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use hardy_core::error::Error;

use args::{Cli, Command};

/// Failure of a CLI run, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    /// Usage, config or parse problem.
    Usage(String),
    /// Numerical breakdown inside the toolkit.
    Numeric(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "error: {m}"),
            Failure::Numeric(m) => write!(f, "numerical failure: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFinite(_)
            | Error::TheoremViolation(_)
            | Error::SingularDivision { .. }
            | Error::Resolution { .. }
            | Error::OrderMismatch { .. }
            | Error::DimensionMismatch(_) => Failure::Numeric(e.to_string()),
            Error::Domain(_)
            | Error::InvalidSpec(_)
            | Error::Parse { .. }
            | Error::Unsupported(_)
            | Error::Precondition(_) => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Matrix(a) => commands::matrix(a),
        Command::Certify(a) => commands::certify(a),
        Command::Spectra(a) => commands::spectra(a),
        Command::Cesaro(a) => commands::cesaro(a),
        Command::Orbit(a) => commands::orbit(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
