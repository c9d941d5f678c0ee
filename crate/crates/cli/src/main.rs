use std::process::ExitCode;

use clap::Parser;
use hopfjoin_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.summary {
                eprintln!("{line}");
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("hopfjoin: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
