use std::process::ExitCode;

use clap::Parser;

mod commands;
mod render;

use commands::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Mismatch) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}
