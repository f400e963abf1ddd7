//! `parrondo`: run the ring, Bernstein–Vazirani and Grover game experiments.
//!
//! Exit codes: 0 success, 1 failed reproduction check, 2 configuration
//! error, 3 letter cap exceeded.

mod commands;
mod config;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, ExperimentConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = ExperimentConfig::resolve(cli).and_then(|cfg| {
        let outcome = commands::dispatch(&cfg)?;
        Ok((outcome, cfg.format))
    });
    match outcome {
        Ok((outcome, format)) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(outcome.report.render(format).as_bytes())
                .is_err()
            {
                return ExitCode::from(error::EXIT_FAILED);
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
