use num_rational::BigRational;
use num_traits::Zero;
use parrondo::bv_game::{
    bv_exact_success_ratio, bv_run, bv_success, single_reflection_baseline_ratio, NoiseModel,
    NoiseRealization,
};
use parrondo::statevec::BasisIndex;
use parrondo::{seeded_rng, trial_seeds, Error};
use rand::Rng;

use super::Outcome;
use crate::config::{BvConfig, BvMode};
use crate::error::{CliError, EXIT_OK};
use crate::report::{Report, Table, Value};

fn model(mode: BvMode) -> NoiseModel {
    match mode {
        BvMode::Noiseless => NoiseModel::Noiseless,
        BvMode::FixedHalf => NoiseModel::FixedHalf,
        BvMode::Independent => NoiseModel::Independent,
    }
}

/// Every realization `mode` can produce, each equally likely under it.
fn support_of_mode(
    n: u32,
    alpha: BasisIndex,
    mode: BvMode,
) -> Result<Vec<NoiseRealization>, Error> {
    let half = 1u64 << (n - 1);
    let keep = |r: &NoiseRealization| match mode {
        BvMode::Noiseless => r.unflipped_count() == 0,
        BvMode::FixedHalf => r.unflipped_count() == half / 2,
        BvMode::Independent => true,
    };
    Ok(NoiseRealization::enumerate_all(n, alpha)?
        .into_iter()
        .filter(keep)
        .collect())
}

pub fn run(cfg: &BvConfig, seed: u64) -> Result<Outcome, CliError> {
    let (n, alpha) = (cfg.n, BasisIndex(cfg.alpha));
    if cfg.trials == 0 {
        return Err(Error::NoSteps.into());
    }
    // Validates n and alpha before any work.
    NoiseRealization::new(n, alpha, [])?;

    let mut report = Report::new("bv", seed);
    report.field("n", n);
    report.field("alpha", cfg.alpha);
    report.field("mode", cfg.mode.name());
    report.field("trials", cfg.trials);

    let seeds = trial_seeds(seed, 2 * cfg.trials);
    let (noise_seeds, shot_seeds) = seeds.split_at(cfg.trials);
    let mut columns = vec![
        "trial",
        "seed",
        "unflipped",
        "exact_success",
        "simulated_success",
    ];
    if cfg.shots > 0 {
        columns.push("shot_frequency");
    }
    let mut runs = Table::new("realizations", &columns);
    let mut exact_sum = BigRational::zero();
    let mut sim_sum = 0.0;
    for (i, (&s, &shot_seed)) in noise_seeds.iter().zip(shot_seeds).enumerate() {
        let res = bv_run(n, alpha, model(cfg.mode), s)?;
        let exact = bv_exact_success_ratio(n, res.realization.unflipped_count())?;
        let mut row = vec![
            i.into(),
            s.into(),
            res.realization.unflipped_count().into(),
            Value::exact(&exact),
            res.success_probability.into(),
        ];
        if cfg.shots > 0 {
            let mut rng = seeded_rng(shot_seed);
            let hits = (0..cfg.shots)
                .filter(|_| rng.random::<f64>() < res.success_probability)
                .count() as u64;
            row.push(Value::exact(&BigRational::new(
                hits.into(),
                cfg.shots.into(),
            )));
        }
        runs.push(row);
        exact_sum += exact;
        sim_sum += res.success_probability;
    }
    let sample_mean = exact_sum / BigRational::from_integer(cfg.trials.into());
    report.field("sample_mean_success", &sample_mean);
    report.field("sample_mean_simulated", sim_sum / cfg.trials as f64);

    let mut headline = sample_mean;
    if cfg.exhaustive {
        let all = support_of_mode(n, alpha, cfg.mode)?;
        let count = BigRational::from_integer(all.len().into());
        let mut exact = BigRational::zero();
        let mut sim = 0.0;
        for r in &all {
            exact += bv_exact_success_ratio(n, r.unflipped_count())?;
            sim += bv_success(r)?;
        }
        let mean = exact / count;
        report.field("exhaustive_realizations", all.len());
        report.field("exhaustive_mean_success", &mean);
        report.field("exhaustive_mean_simulated", sim / all.len() as f64);
        headline = mean;
    }

    let eighth = BigRational::new(1.into(), 8.into());
    let baseline = single_reflection_baseline_ratio(n);
    report.field("baseline_single_reflection", &baseline);
    report.field("beats_baseline", headline > baseline);
    report.field(
        "bound_check",
        if headline > eighth {
            "PASS (mean > 1/8)"
        } else {
            "FAIL (mean <= 1/8)"
        },
    );
    report.tables.push(runs);
    Ok(Outcome {
        report,
        exit: EXIT_OK,
    })
}
