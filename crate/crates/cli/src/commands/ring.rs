use num_rational::BigRational;
use parrondo::ring_games::{
    combined_rate, simulate_ring, single_game_rate, stationary_distribution, transition_matrix,
    CombinedRingGame,
};

use super::Outcome;
use crate::config::RingConfig;
use crate::error::{CliError, EXIT_OK};
use crate::report::{Report, Table, Value};

pub fn run(cfg: &RingConfig, seed: u64) -> Result<Outcome, CliError> {
    let game = CombinedRingGame::from_moduli(&cfg.moduli)?;
    let mut report = Report::new("ring", seed);
    let joined: Vec<String> = cfg.moduli.iter().map(u64::to_string).collect();
    report.field("moduli", joined.join(","));
    report.field("positions", game.modulus_product());

    let mut singles = Table::new(
        "single_games",
        &["modulus", "winning_count", "win_probability", "rate"],
    );
    for &g in game.games() {
        let r = single_game_rate(g)?;
        singles.push(vec![
            g.modulus().into(),
            r.winning_count.into(),
            Value::exact(&r.win_probability),
            Value::exact(&r.rate),
        ]);
    }

    let matrix = transition_matrix(&game);
    let combined = combined_rate(&game)?;
    report.field("winning_count", combined.winning_count);
    report.field("win_probability", &combined.win_probability);
    report.field("rate", &combined.rate);
    report.field("doubly_stochastic", matrix.is_doubly_stochastic());

    let pi = stationary_distribution(&matrix)?;
    if pi.is_uniform() {
        report.field("stationary", "uniform");
        report.field("stationary_weight", &pi.weights()[0]);
    } else {
        report.field("stationary", "non-uniform");
        let mut t = Table::new("stationary", &["position", "probability"]);
        for (j, w) in pi.weights().iter().enumerate() {
            t.push(vec![j.into(), Value::exact(w)]);
        }
        report.tables.push(t);
    }

    if cfg.steps > 0 {
        let mc = simulate_ring(&game, cfg.steps, seed)?;
        let p = combined.win_probability.clone();
        report.field("mc_steps", mc.steps);
        report.field("mc_wins", mc.wins);
        report.field(
            "mc_win_frequency",
            &BigRational::new(mc.wins.into(), mc.steps.into()),
        );
        report.field("mc_rate", mc.rate);
        report.field("mc_standard_error", mc.standard_error);
        let exact: f64 = num_traits::ToPrimitive::to_f64(&p).unwrap_or(f64::NAN);
        let binomial_se = (exact * (1.0 - exact) / mc.steps as f64).sqrt();
        report.field("mc_z_score", (mc.win_frequency - exact) / binomial_se);
    }

    report.tables.insert(0, singles);
    Ok(Outcome {
        report,
        exit: EXIT_OK,
    })
}
