mod args;
mod commands;
mod config;
mod output;
mod seeds;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] prefattach::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(prefattach::Error::Guard(_)) => 2,
            CliError::VerificationFailed => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let argv = match config::expand_argv(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerificationFailed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
