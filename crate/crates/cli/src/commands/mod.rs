pub mod bv;
pub mod grover;
pub mod reproduce;
pub mod ring;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;
use crate::report::Report;

/// A finished run: what to print and the process exit code.
pub struct Outcome {
    pub report: Report,
    pub exit: u8,
}

pub fn dispatch(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    match &cfg.experiment {
        Experiment::Ring(c) => ring::run(c, cfg.seed),
        Experiment::Bv(c) => bv::run(c, cfg.seed),
        Experiment::Grover(c) => grover::run(c, cfg.seed),
        Experiment::Reproduce => reproduce::run(cfg.seed),
    }
}
