use std::process::ExitCode;

use clap::Parser;
use mixquant_cli::args::Cli;
use mixquant_cli::error::EXIT_NUMERICAL;
use mixquant_cli::{run, Outcome};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Numerical(msg)) => {
            eprintln!("mixquant: {msg}");
            ExitCode::from(EXIT_NUMERICAL as u8)
        }
        Err(e) => {
            eprintln!("mixquant: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
