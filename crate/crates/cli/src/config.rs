//! Command-line flags, the optional TOML config file, and their merge.
//!
//! The config file uses the flag names as keys; global keys sit at the top
//! level and subcommand keys under `[ring]`, `[bv]` and `[grover]`. A flag
//! given on the command line always wins over the file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::CliError;
use crate::report::Format;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "parrondo",
    version,
    about = "Classical and quantum Parrondo game experiments"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Master seed; every trial seed is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML file with default values for any flag.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wheel rotation games and their random combination.
    Ring(RingArgs),
    /// Bernstein–Vazirani with an unreliable oracle.
    Bv(BvArgs),
    /// Grover stopping game over random reflection sequences.
    Grover(GroverArgs),
    /// Recompute every headline number and report PASS/FAIL per row.
    Reproduce,
}

#[derive(Debug, Args)]
pub struct RingArgs {
    /// Comma-separated, pairwise coprime odd moduli.
    #[arg(long, value_delimiter = ',')]
    pub moduli: Option<Vec<u64>>,
    /// Monte Carlo rounds to simulate (0 skips the simulation).
    #[arg(long)]
    pub steps: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BvArgs {
    /// Number of qubits.
    #[arg(short = 'n', long = "qubits")]
    pub n: Option<u32>,
    /// Hidden string, as an integer below 2^n.
    #[arg(long)]
    pub alpha: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<BvMode>,
    /// Noise realizations to sample.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Also average over every realization the mode can produce.
    #[arg(long)]
    pub exhaustive: bool,
    /// Simulated measurements per realization (0 reports probabilities only).
    #[arg(long)]
    pub shots: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GroverArgs {
    /// Number of qubits.
    #[arg(short = 'n', long = "qubits")]
    pub n: Option<u32>,
    /// Marked basis index.
    #[arg(long)]
    pub alpha: Option<u64>,
    /// `ceil` (alias `paper`), `best`, or `k=<int>`.
    #[arg(long)]
    pub strategy: Option<StrategyChoice>,
    /// Plays used for the waiting-time statistics.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Emit a per-k table of success and waiting time.
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BvMode {
    Noiseless,
    FixedHalf,
    Independent,
}

impl BvMode {
    pub fn name(self) -> &'static str {
        match self {
            BvMode::Noiseless => "noiseless",
            BvMode::FixedHalf => "fixed-half",
            BvMode::Independent => "independent",
        }
    }
}

/// How many Grover iterations the player waits for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyChoice {
    /// `⌈π·√(2ⁿ)/4⌉`.
    Ceil,
    /// The success-maximizing iteration count.
    Best,
    Fixed(u64),
}

impl FromStr for StrategyChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" | "ceil" => Ok(StrategyChoice::Ceil),
            "best" => Ok(StrategyChoice::Best),
            _ => {
                let k = s.strip_prefix("k=").ok_or_else(|| {
                    format!("unknown strategy `{s}`; expected ceil, paper, best or k=<int>")
                })?;
                k.parse::<u64>()
                    .map(StrategyChoice::Fixed)
                    .map_err(|_| format!("`{k}` is not a non-negative integer"))
            }
        }
    }
}

impl fmt::Display for StrategyChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyChoice::Ceil => f.write_str("ceil"),
            StrategyChoice::Best => f.write_str("best"),
            StrategyChoice::Fixed(k) => write!(f, "k={k}"),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    format: Option<Format>,
    #[serde(default)]
    ring: RingFile,
    #[serde(default)]
    bv: BvFile,
    #[serde(default)]
    grover: GroverFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingFile {
    moduli: Option<Vec<u64>>,
    steps: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BvFile {
    n: Option<u32>,
    alpha: Option<u64>,
    mode: Option<BvMode>,
    trials: Option<usize>,
    exhaustive: Option<bool>,
    shots: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroverFile {
    n: Option<u32>,
    alpha: Option<u64>,
    strategy: Option<String>,
    trials: Option<usize>,
    sweep: Option<bool>,
}

fn load(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingConfig {
    pub moduli: Vec<u64>,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvConfig {
    pub n: u32,
    pub alpha: u64,
    pub mode: BvMode,
    pub trials: usize,
    pub exhaustive: bool,
    pub shots: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroverConfig {
    pub n: u32,
    pub alpha: u64,
    pub strategy: StrategyChoice,
    pub trials: usize,
    pub sweep: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Ring(RingConfig),
    Bv(BvConfig),
    Grover(GroverConfig),
    Reproduce,
}

/// Fully resolved invocation; the seed is always concrete.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub format: Format,
    pub experiment: Experiment,
}

fn required<T>(value: Option<T>, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| {
        CliError::Config(format!(
            "missing required value `{name}` (flag or config file)"
        ))
    })
}

impl ExperimentConfig {
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => load(path)?,
            None => FileConfig::default(),
        };
        let experiment = match cli.command {
            Command::Ring(a) => Experiment::Ring(RingConfig {
                moduli: required(a.moduli.or(file.ring.moduli), "moduli")?,
                steps: a.steps.or(file.ring.steps).unwrap_or(0),
            }),
            Command::Bv(a) => Experiment::Bv(BvConfig {
                n: required(a.n.or(file.bv.n), "n")?,
                alpha: a.alpha.or(file.bv.alpha).unwrap_or(1),
                mode: a.mode.or(file.bv.mode).unwrap_or(BvMode::FixedHalf),
                trials: a.trials.or(file.bv.trials).unwrap_or(1),
                exhaustive: a.exhaustive || file.bv.exhaustive.unwrap_or(false),
                shots: a.shots.or(file.bv.shots).unwrap_or(0),
            }),
            Command::Grover(a) => {
                let from_file = file
                    .grover
                    .strategy
                    .as_deref()
                    .map(StrategyChoice::from_str)
                    .transpose()
                    .map_err(CliError::Config)?;
                Experiment::Grover(GroverConfig {
                    n: required(a.n.or(file.grover.n), "n")?,
                    alpha: a.alpha.or(file.grover.alpha).unwrap_or(0),
                    strategy: a.strategy.or(from_file).unwrap_or(StrategyChoice::Ceil),
                    trials: a.trials.or(file.grover.trials).unwrap_or(1000),
                    sweep: a.sweep || file.grover.sweep.unwrap_or(false),
                })
            }
            Command::Reproduce => Experiment::Reproduce,
        };
        Ok(Self {
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            format: cli.format.or(file.format).unwrap_or(Format::Table),
            experiment,
        })
    }
}
