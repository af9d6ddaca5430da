use std::process::ExitCode;

use clap::Parser;
use sscov_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sscov: {}: {e}", e.category());
            e.exit_code()
        }
    }
}
