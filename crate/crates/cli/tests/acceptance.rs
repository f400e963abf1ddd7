//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use parrondo::bv_game::{
    bv_exact_success, bv_run, independent_mean_exhaustive, oracle_support,
    single_reflection_baseline, NoiseModel,
};
use parrondo::grover_game::{
    apply_letter, best_k, ceil_k, realize_word, reduce_push, success_after_k, waiting_time_stats,
    Letter, ReducedWord, LETTER_CAP,
};
use parrondo::ring_games::{
    combined_rate, simulate_ring, single_game_rate, transition_matrix, CombinedRingGame,
    RotationGame,
};
use parrondo::seeded_rng;
use parrondo::statevec::{BasisIndex, StateVector};
use rand::Rng;

const EXACT_TOL: f64 = 1e-12;
const DOCUMENTED_TOL: f64 = 1e-6;
const MC_SIGMAS: f64 = 4.0;
const HITTING_REL_TOL: f64 = 0.15;
const SWEEP_BUDGET: Duration = Duration::from_secs(10);

const SWEEP_PAIRS: [(u64, u64); 15] = [
    (3, 7),
    (3, 11),
    (3, 19),
    (3, 23),
    (3, 31),
    (7, 11),
    (7, 19),
    (7, 23),
    (7, 31),
    (11, 19),
    (11, 23),
    (11, 31),
    (19, 23),
    (19, 31),
    (23, 31),
];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_classical_rates() -> Outcome {
    let r3 = single_game_rate(RotationGame::new(3).unwrap())
        .unwrap()
        .rate;
    let r7 = single_game_rate(RotationGame::new(7).unwrap())
        .unwrap()
        .rate;
    ensure(r3 == q(-1, 3) && r7 == q(-1, 7), format!("got {r3}, {r7}"))?;
    Ok(format!("rates {r3}, {r7}"))
}

fn c2_combined_game() -> Outcome {
    let game = CombinedRingGame::from_moduli(&[3, 7]).unwrap();
    let report = combined_rate(&game).unwrap();
    ensure(
        report.win_probability == q(11, 21),
        format!("win {}", report.win_probability),
    )?;
    ensure(report.rate == q(1, 21), format!("rate {}", report.rate))?;
    let matrix = transition_matrix(&game);
    ensure(matrix.size() == 21, "matrix is not 21x21")?;
    ensure(matrix.row_sums().iter().all(One::is_one), "row sum != 1")?;
    ensure(
        matrix.column_sums().iter().all(One::is_one),
        "column sum != 1",
    )?;
    Ok("win 11/21, rate 1/21, 21x21 rows and columns sum to 1".into())
}

fn c3_sweep() -> Outcome {
    let start = Instant::now();
    for (m, n) in SWEEP_PAIRS {
        let rm = single_game_rate(RotationGame::new(m).unwrap())
            .unwrap()
            .rate;
        let rn = single_game_rate(RotationGame::new(n).unwrap())
            .unwrap()
            .rate;
        let rc = combined_rate(&CombinedRingGame::from_moduli(&[m, n]).unwrap())
            .unwrap()
            .rate;
        ensure(
            rm.is_negative() && rn.is_negative(),
            format!("({m},{n}) single rates {rm}, {rn}"),
        )?;
        ensure(
            rc == q(1, (m * n) as i64),
            format!("({m},{n}) combined rate {rc}"),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SWEEP_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!(
        "15 pairs, combined rate 1/(mn), {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn c4_monte_carlo() -> Outcome {
    let game = CombinedRingGame::from_moduli(&[3, 7]).unwrap();
    let p = 11.0 / 21.0;
    let steps = 1_000_000u64;
    let se = (p * (1.0 - p) / steps as f64).sqrt();
    let mut worst: f64 = 0.0;
    for seed in [11u64, 22, 33, 44, 55] {
        let run = simulate_ring(&game, steps, seed).unwrap();
        let z = (run.win_frequency - p).abs() / se;
        ensure(z < MC_SIGMAS, format!("seed {seed}: |z| = {z:.3}"))?;
        worst = worst.max(z);
    }
    Ok(format!("5 seeds x 10^6 steps, max |z| = {worst:.3}"))
}

fn c5_bv_bound() -> Outcome {
    for n in 2..=10u32 {
        let top = (1u64 << n) - 1;
        for alpha in [1, top, top / 3 + 1] {
            let res = bv_run(n, BasisIndex(alpha), NoiseModel::FixedHalf, 1000 + alpha).unwrap();
            let closed = bv_exact_success(n, res.realization.unflipped_count()).unwrap();
            let p = res.success_probability;
            ensure(
                (p - closed).abs() < EXACT_TOL,
                format!("n={n} alpha={alpha}: {p} vs closed {closed}"),
            )?;
            ensure(
                (p - 0.25).abs() < EXACT_TOL && p > 0.125,
                format!("n={n} alpha={alpha}: {p}"),
            )?;
        }
    }
    for n in [3u32, 4] {
        let expected = 0.25 + (2f64).powi(-(n as i32 + 1));
        for alpha in 1..1u64 << n {
            let mean = independent_mean_exhaustive(n, BasisIndex(alpha)).unwrap();
            ensure(
                (mean - expected).abs() < EXACT_TOL,
                format!("n={n} alpha={alpha}: mean {mean}"),
            )?;
        }
    }
    Ok("fixed-half 1/4 > 1/8 for n=2..10; independent means 5/16, 9/32".into())
}

fn c6_baseline() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=10u32 {
        let alpha = BasisIndex((1 << n) - 1);
        let expected = 4.0 / 4f64.powi(n as i32);
        for y in oracle_support(n, alpha).unwrap() {
            let b = single_reflection_baseline(n, alpha, BasisIndex(y)).unwrap();
            ensure(
                (b - expected).abs() < EXACT_TOL,
                format!("n={n} y={y}: {b} vs {expected}"),
            )?;
            if b >= 0.25 && !failures.contains(&n) {
                failures.push(n);
            }
        }
    }
    ensure(
        failures.is_empty(),
        format!("baseline 4/4^n holds for every y, but is not strictly below 1/4 at n = {failures:?} (4/16 = 1/4)"),
    )?;
    Ok("baseline 4/4^n, strictly below 1/4".into())
}

fn random_state(n: u32, rng: &mut impl Rng) -> StateVector {
    let raw: Vec<f64> = (0..1usize << n)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let norm = raw.iter().map(|a| a * a).sum::<f64>().sqrt();
    StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn c7_identities() -> Outcome {
    let mut rng = seeded_rng(7);
    for _ in 0..200 {
        let n = rng.random_range(1..=10u32);
        let alpha = BasisIndex(rng.random_range(0..1u64 << n));
        let v = random_state(n, &mut rng);
        let aa = v
            .clone()
            .flip_sign_at(alpha)
            .unwrap()
            .flip_sign_at(alpha)
            .unwrap();
        let bb = v.clone().diffusion().diffusion();
        ensure(
            aa.max_abs_diff(&v) < EXACT_TOL,
            format!("A^2 != I at n={n}"),
        )?;
        ensure(
            bb.max_abs_diff(&v) < EXACT_TOL,
            format!("B^2 != I at n={n}"),
        )?;
        let psi = StateVector::uniform(n).unwrap();
        ensure(
            psi.clone().diffusion().max_abs_diff(&psi) < EXACT_TOL,
            format!("B psi != psi at n={n}"),
        )?;
    }
    for i in 0..1000 {
        let n = [2u32, 3, 4][i % 3];
        let alpha = BasisIndex(rng.random_range(0..1u64 << n));
        let len = rng.random_range(0..=200usize);
        let mut direct = StateVector::uniform(n).unwrap();
        let mut word = ReducedWord::EMPTY;
        for _ in 0..len {
            let l = Letter::draw(&mut rng);
            direct = apply_letter(direct, l, alpha).unwrap();
            word = reduce_push(word, l);
        }
        let diff = realize_word(word, n, alpha).unwrap().max_abs_diff(&direct);
        ensure(
            diff < EXACT_TOL,
            format!("sequence {i} (n={n}, len={len}): diff {diff:e}"),
        )?;
    }
    Ok("involutions on 200 random states; 1000 sequences reduce soundly".into())
}

fn c8_winning_game() -> Outcome {
    for n in 2..=24u32 {
        let s = success_after_k(n, best_k(n));
        ensure(s > 0.5, format!("best k at n={n}: {s}"))?;
    }
    for n in 4..=24u32 {
        let s = success_after_k(n, ceil_k(n));
        ensure(s > 0.5, format!("ceil k at n={n}: {s}"))?;
    }
    let s2 = success_after_k(2, ceil_k(2));
    let s3 = success_after_k(3, ceil_k(3));
    ensure(
        (s2 - 0.25).abs() < DOCUMENTED_TOL,
        format!("n=2 ceil k: {s2}"),
    )?;
    ensure(
        (s3 - 169.0 / 512.0).abs() < DOCUMENTED_TOL,
        format!("n=3 ceil k: {s3}"),
    )?;
    Ok(format!(
        "best k wins n=2..24; ceil k wins n=4..24; n=2 -> {s2:.6}, n=3 -> {s3:.6}"
    ))
}

/// Expected hitting time of `level` from 0 for the walk that holds at 0 with
/// probability 1/2 and otherwise moves ±1, from the first-step equations
/// `h(0) = 1 + h(0)/2 + h(1)/2`, `h(i) = 1 + h(i−1)/2 + h(i+1)/2`,
/// `h(level) = 0`, solved by exact tridiagonal elimination.
fn hitting_time(level: usize) -> BigRational {
    let half = q(1, 2);
    let n = level;
    let mut sub = vec![BigRational::zero(); n];
    let mut diag = vec![BigRational::one(); n];
    let mut sup = vec![BigRational::zero(); n];
    let mut rhs = vec![BigRational::one(); n];
    diag[0] = half.clone();
    for i in 0..n {
        if i > 0 {
            sub[i] = -half.clone();
        }
        if i + 1 < n {
            sup[i] = -half.clone();
        }
    }
    for i in 1..n {
        let f = &sub[i] / &diag[i - 1];
        diag[i] = &diag[i] - &f * &sup[i - 1];
        rhs[i] = &rhs[i] - &f * &rhs[i - 1];
    }
    let mut h = vec![BigRational::zero(); n];
    h[n - 1] = &rhs[n - 1] / &diag[n - 1];
    for i in (0..n - 1).rev() {
        h[i] = (&rhs[i] - &sup[i] * &h[i + 1]) / &diag[i];
    }
    h[0].clone()
}

fn c9_stopping() -> Outcome {
    let k = ceil_k(4);
    ensure(k == 4, format!("ceil k at n=4 is {k}"))?;
    let exact = hitting_time(2 * k as usize);
    let target = exact.to_f64().unwrap();
    let stats = waiting_time_stats(k, 10_000, 9).unwrap();
    ensure(
        stats.cap_exceeded == 0,
        format!("{} plays exceeded the {LETTER_CAP} cap", stats.cap_exceeded),
    )?;
    ensure(stats.completed == 10_000, "not every play completed")?;
    let rel = (stats.mean - target).abs() / target;
    ensure(
        rel < HITTING_REL_TOL,
        format!("mean {} vs exact {exact}", stats.mean),
    )?;
    Ok(format!(
        "10^4 plays stop; mean {:.3} vs exact {exact} ({:.1}% off)",
        stats.mean,
        100.0 * rel
    ))
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_parrondo"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn c10_reproducibility() -> Outcome {
    let (code, first) = run_cli(&["reproduce", "--format", "json"]);
    ensure(code == Some(0), format!("reproduce exited {code:?}"))?;
    let (_, second) = run_cli(&["reproduce", "--format", "json"]);
    ensure(first == second, "reproduce output differs between runs")?;
    let commands: [&[&str]; 4] = [
        &["ring", "--moduli", "3,7", "--steps", "20000", "--seed", "5"],
        &[
            "bv",
            "-n",
            "5",
            "--alpha",
            "9",
            "--mode",
            "independent",
            "--trials",
            "32",
            "--shots",
            "64",
            "--format",
            "csv",
        ],
        &[
            "grover",
            "-n",
            "5",
            "--strategy",
            "best",
            "--trials",
            "500",
            "--sweep",
            "--format",
            "json",
            "--seed",
            "3",
        ],
        &["grover", "-n", "6", "--strategy", "k=3", "--trials", "500"],
    ];
    for args in commands {
        let (c1, a) = run_cli(args);
        let (c2, b) = run_cli(args);
        ensure(
            c1 == Some(0) && c2 == Some(0),
            format!("{args:?} exited {c1:?}/{c2:?}"),
        )?;
        ensure(a == b, format!("{args:?} output differs between runs"))?;
    }
    Ok("reproduce exits 0; reruns byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "classical rates exact", c1_classical_rates),
        (2, "combined classical game exact", c2_combined_game),
        (3, "generalization sweep", c3_sweep),
        (4, "Monte Carlo consistency", c4_monte_carlo),
        (5, "BV exact bound", c5_bv_bound),
        (6, "BV baseline separation", c6_baseline),
        (7, "Grover-game identities", c7_identities),
        (8, "winning combined quantum game", c8_winning_game),
        (9, "almost-sure stopping", c9_stopping),
        (10, "reproducibility", c10_reproducibility),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
