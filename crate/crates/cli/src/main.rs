mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::RunConfig;

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// A verification check exceeded its tolerance (exit 1).
    Check(String),
    /// Invalid parameters or options (exit 2).
    Invalid(String),
    /// Reading or writing files failed (exit 3).
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Check(m) | CliError::Invalid(m) | CliError::Io(m) => m,
        }
    }
}

impl From<singular_weyl::Error> for CliError {
    fn from(e: singular_weyl::Error) -> Self {
        match e {
            singular_weyl::Error::Internal(m) => CliError::Check(m),
            singular_weyl::Error::InvalidParameter(m) => CliError::Invalid(m),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Admissible(a) => commands::admissible(&RunConfig::from_args(&a)?),
        Command::Ktypes(a) => commands::ktypes(&RunConfig::from_args(&a)?),
        Command::Verify(a) => commands::verify(&RunConfig::from_args(&a)?),
        Command::Structure(a) => commands::structure(&RunConfig::from_args(&a)?),
        Command::PlotData(p) => commands::plot_data(&RunConfig::from_args(&p.common)?, p.figure, p.samples),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
