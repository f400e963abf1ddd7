use parrondo::grover_game::{
    best_k, ceil_k, realize_word, success_after_k, waiting_time_stats, ReducedWord,
    StoppingStrategy, WaitingTimeStats,
};
use parrondo::statevec::{BasisIndex, StateVector, MAX_QUBITS};
use parrondo::{trial_seeds, Error};

use super::Outcome;
use crate::config::{GroverConfig, StrategyChoice};
use crate::error::{CliError, EXIT_CAP, EXIT_OK};
use crate::report::{Report, Table, Value};

/// Above this many qubits the closed form is reported without a state-vector
/// cross-check.
pub const VERIFY_MAX_QUBITS: u32 = 16;

fn validate(n: u32, alpha: u64) -> Result<(), Error> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if n > MAX_QUBITS {
        return Err(Error::QubitsOutOfRange(n));
    }
    if alpha >= 1 << n {
        return Err(Error::IndexOutOfRange {
            index: alpha,
            dim: 1 << n,
        });
    }
    Ok(())
}

/// Expected letters until the reduced word first has length `2k`: the walk
/// holding at 0 reaches level `L` after `L(L+1)` steps on average.
fn expected_waiting_time(k: u64) -> u64 {
    2 * k * (2 * k + 1)
}

fn simulated(n: u32, alpha: BasisIndex, k: u64) -> Result<Value, Error> {
    if n > VERIFY_MAX_QUBITS {
        return Ok(Value::Missing);
    }
    let state = realize_word(ReducedWord::with_length(2 * k), n, alpha)?;
    Ok(state.probability_of(alpha)?.into())
}

pub fn run(cfg: &GroverConfig, seed: u64) -> Result<Outcome, CliError> {
    let (n, alpha) = (cfg.n, BasisIndex(cfg.alpha));
    validate(n, cfg.alpha)?;
    let k = match cfg.strategy {
        StrategyChoice::Ceil => ceil_k(n),
        StrategyChoice::Best => best_k(n),
        StrategyChoice::Fixed(k) => k,
    };
    let strategy = StoppingStrategy::new(k)?;

    let mut report = Report::new("grover", seed);
    report.field("n", n);
    report.field("alpha", cfg.alpha);
    report.field("strategy", cfg.strategy.to_string());
    report.field("k", k);
    report.field("target_length", strategy.target_length());
    let closed = success_after_k(n, k);
    report.field("closed_form_success", closed);
    report.field("simulated_success", simulated(n, alpha, k)?);

    let stats = waiting_time_stats(k, cfg.trials, seed)?;
    write_stats(&mut report, &stats);
    report.field("expected_waiting_time", expected_waiting_time(k));

    let win = closed > 0.5;
    report.field("verdict", if win { "WIN" } else { "LOSE" });
    if !win && cfg.strategy == StrategyChoice::Ceil {
        report.field(
            "note",
            "the ceil-k rule does not exceed 1/2 at this n; see --strategy best",
        );
    }
    let mut capped = stats.cap_exceeded > 0;

    if cfg.sweep {
        let (table, sweep_capped) = sweep(n, alpha, k, cfg.trials, seed)?;
        capped |= sweep_capped;
        report.tables.push(table);
        report.csv_only_table = Some(report.tables.len() - 1);
    }
    Ok(Outcome {
        report,
        exit: if capped { EXIT_CAP } else { EXIT_OK },
    })
}

fn write_stats(report: &mut Report, stats: &WaitingTimeStats) {
    report.field("plays", stats.completed + stats.cap_exceeded);
    report.field("plays_completed", stats.completed);
    report.field("plays_capped", stats.cap_exceeded);
    if stats.completed == 0 {
        report.field("mean_waiting_time", Value::Missing);
        report.field("waiting_time_variance", Value::Missing);
        report.field("max_waiting_time", Value::Missing);
    } else {
        report.field("mean_waiting_time", stats.mean);
        report.field("waiting_time_variance", stats.variance);
        report.field("max_waiting_time", stats.max);
    }
}

/// Rows for `k = 0..=max(2·ceil_k, k_used)`. After the first capped play the
/// remaining waiting times are left blank.
fn sweep(
    n: u32,
    alpha: BasisIndex,
    k_used: u64,
    trials: usize,
    seed: u64,
) -> Result<(Table, bool), CliError> {
    let k_max = (2 * ceil_k(n)).max(k_used);
    let seeds = trial_seeds(seed, k_max as usize + 1);
    let mut table = Table::new(
        "sweep",
        &[
            "k",
            "closed_form_success",
            "simulated_success",
            "mean_waiting_time",
        ],
    );
    let mut state = (n <= VERIFY_MAX_QUBITS)
        .then(|| StateVector::uniform(n))
        .transpose()?;
    let mut capped = false;
    for k in 0..=k_max {
        if k > 0 {
            state = state
                .map(|s| s.flip_sign_at(alpha).map(StateVector::diffusion))
                .transpose()?;
        }
        let sim = match &state {
            Some(s) => s.probability_of(alpha)?.into(),
            None => Value::Missing,
        };
        let wait = if k == 0 {
            Value::Float(0.0)
        } else if capped {
            Value::Missing
        } else {
            let stats = waiting_time_stats(k, trials, seeds[k as usize])?;
            capped = stats.cap_exceeded > 0;
            if capped {
                Value::Missing
            } else {
                stats.mean.into()
            }
        };
        table.push(vec![k.into(), success_after_k(n, k).into(), sim, wait]);
    }
    Ok((table, capped))
}
