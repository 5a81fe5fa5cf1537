use std::process::ExitCode;

use clap::Parser;
use rdhei_cli::Cli;

fn main() -> ExitCode {
    match rdhei_cli::run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
