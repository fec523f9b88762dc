use std::process::ExitCode;

use clap::Parser;
use gramcomp_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gramcomp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
