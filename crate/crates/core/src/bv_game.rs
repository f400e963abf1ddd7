//! Bernstein–Vazirani guessing with an unreliable phase oracle.
//!
//! The reliable oracle maps `|x⟩ ↦ (−1)^{x·α}|x⟩`. The noisy one fires on only
//! part of the basis. On states with `x·α = 0` firing or not makes no
//! difference, so a noise realization is just the set of indices with
//! `y·α = 1` that were left unflipped.
//!
//! Running `H^{⊗n} Ô H^{⊗n} |0…0⟩` with `s` unflipped indices out of the
//! `2^{n−1}` candidates leaves amplitude `1 − s/2^{n−1}` on `|α⟩`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use crate::statevec::{BasisIndex, StateVector, MAX_QUBITS};
use crate::{seeded_rng, Error, Result};

/// More coins than this cannot be enumerated exhaustively.
pub const EXHAUSTIVE_MAX_COINS: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseModel {
    /// The oracle always fires.
    Noiseless,
    /// Exactly half of the `y·α = 1` indices, chosen uniformly, stay unflipped.
    FixedHalf,
    /// Each `y·α = 1` index stays unflipped with probability 1/2.
    Independent,
}

/// Which of the oracle's active indices failed to flip in one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseRealization {
    qubits: u32,
    alpha: BasisIndex,
    unflipped: BTreeSet<u64>,
}

fn check_game(n: u32, alpha: BasisIndex) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if n > MAX_QUBITS {
        return Err(Error::QubitsOutOfRange(n));
    }
    if alpha.0 == 0 {
        return Err(Error::ZeroAlpha);
    }
    if alpha.0 >= 1 << n {
        return Err(Error::IndexOutOfRange {
            index: alpha.0,
            dim: 1 << n,
        });
    }
    Ok(())
}

/// The `2^{n−1}` indices `y` with `y·α = 1`, ascending.
pub fn oracle_support(n: u32, alpha: BasisIndex) -> Result<Vec<u64>> {
    check_game(n, alpha)?;
    Ok((0..1u64 << n)
        .filter(|&y| BasisIndex(y).dot(alpha) == 1)
        .collect())
}

impl NoiseRealization {
    pub fn new(
        n: u32,
        alpha: BasisIndex,
        unflipped: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        check_game(n, alpha)?;
        let unflipped: BTreeSet<u64> = unflipped.into_iter().collect();
        for &y in &unflipped {
            if y >= 1 << n {
                return Err(Error::IndexOutOfRange {
                    index: y,
                    dim: 1 << n,
                });
            }
            if BasisIndex(y).dot(alpha) != 1 {
                return Err(Error::NotOnOracleSupport { y, alpha: alpha.0 });
            }
        }
        Ok(Self {
            qubits: n,
            alpha,
            unflipped,
        })
    }

    pub fn sample<R: Rng + ?Sized>(
        n: u32,
        alpha: BasisIndex,
        model: NoiseModel,
        rng: &mut R,
    ) -> Result<Self> {
        let support = oracle_support(n, alpha)?;
        let unflipped: Vec<u64> = match model {
            NoiseModel::Noiseless => Vec::new(),
            NoiseModel::FixedHalf => {
                rand::seq::index::sample(rng, support.len(), support.len() / 2)
                    .into_iter()
                    .map(|i| support[i])
                    .collect()
            }
            NoiseModel::Independent => support
                .into_iter()
                .filter(|_| rng.random::<bool>())
                .collect(),
        };
        Ok(Self {
            qubits: n,
            alpha,
            unflipped: unflipped.into_iter().collect(),
        })
    }

    /// All `2^{2^{n−1}}` independent-coin realizations, each equally likely.
    pub fn enumerate_all(n: u32, alpha: BasisIndex) -> Result<Vec<Self>> {
        let support = oracle_support(n, alpha)?;
        let coins = support.len() as u64;
        if coins > EXHAUSTIVE_MAX_COINS {
            return Err(Error::ExhaustiveTooLarge(coins));
        }
        Ok((0..1u64 << coins)
            .map(|mask| Self {
                qubits: n,
                alpha,
                unflipped: support
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &y)| y)
                    .collect(),
            })
            .collect())
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn alpha(&self) -> BasisIndex {
        self.alpha
    }

    pub fn unflipped(&self) -> &BTreeSet<u64> {
        &self.unflipped
    }

    pub fn unflipped_count(&self) -> u64 {
        self.unflipped.len() as u64
    }
}

/// Applies the noisy oracle: negates every `y` with `y·α = 1` except the
/// unflipped ones.
pub fn noisy_oracle(mut state: StateVector, realization: &NoiseRealization) -> Result<StateVector> {
    if state.qubits() != realization.qubits {
        return Err(Error::QubitMismatch(state.qubits(), realization.qubits));
    }
    let alpha = realization.alpha;
    for y in 0..state.dim() {
        if BasisIndex(y).dot(alpha) == 1 && !realization.unflipped.contains(&y) {
            state = state.flip_sign_at(BasisIndex(y))?;
        }
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvResult {
    pub success_probability: f64,
    pub realization: NoiseRealization,
}

/// Probability of reading `α` after `H^{⊗n} Ô H^{⊗n} |0…0⟩` for a fixed
/// realization, by state-vector simulation.
pub fn bv_success(realization: &NoiseRealization) -> Result<f64> {
    let n = realization.qubits;
    let state = StateVector::basis(n, BasisIndex(0))?.hadamard_all();
    let state = noisy_oracle(state, realization)?.hadamard_all();
    state.probability_of(realization.alpha)
}

/// Samples a realization from `noise` with `seed` and simulates the game.
pub fn bv_run(n: u32, alpha: BasisIndex, noise: NoiseModel, seed: u64) -> Result<BvResult> {
    let mut rng = seeded_rng(seed);
    let realization = NoiseRealization::sample(n, alpha, noise, &mut rng)?;
    Ok(BvResult {
        success_probability: bv_success(&realization)?,
        realization,
    })
}

/// `(1 − s/2^{n−1})²` as an exact rational.
pub fn bv_exact_success_ratio(n: u32, unflipped_count: u64) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if n > MAX_QUBITS {
        return Err(Error::QubitsOutOfRange(n));
    }
    let half = 1u64 << (n - 1);
    if unflipped_count > half {
        return Err(Error::CountOutOfRange {
            count: unflipped_count,
            max: half,
        });
    }
    let amp =
        BigRational::one() - BigRational::new(BigInt::from(unflipped_count), BigInt::from(half));
    Ok(&amp * &amp)
}

/// `(1 − s/2^{n−1})²`.
pub fn bv_exact_success(n: u32, unflipped_count: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    if n > MAX_QUBITS {
        return Err(Error::QubitsOutOfRange(n));
    }
    let half = 1u64 << (n - 1);
    if unflipped_count > half {
        return Err(Error::CountOutOfRange {
            count: unflipped_count,
            max: half,
        });
    }
    let amp = 1.0 - unflipped_count as f64 / half as f64;
    Ok(amp * amp)
}

/// Mean success of the independent-coin oracle over every realization.
pub fn independent_mean_exhaustive(n: u32, alpha: BasisIndex) -> Result<f64> {
    let all = NoiseRealization::enumerate_all(n, alpha)?;
    let total = all.iter().map(bv_success).sum::<Result<f64>>()?;
    Ok(total / all.len() as f64)
}

/// Success when the oracle is replaced by a single sign flip at `y`:
/// `|⟨α| H^{⊗n} F_y H^{⊗n} |0…0⟩|²`, which equals `4/4ⁿ`.
pub fn single_reflection_baseline(n: u32, alpha: BasisIndex, y: BasisIndex) -> Result<f64> {
    check_game(n, alpha)?;
    if y.0 >= 1 << n {
        return Err(Error::IndexOutOfRange {
            index: y.0,
            dim: 1 << n,
        });
    }
    if y.dot(alpha) != 1 {
        return Err(Error::NotOnOracleSupport {
            y: y.0,
            alpha: alpha.0,
        });
    }
    let state = StateVector::basis(n, BasisIndex(0))?
        .hadamard_all()
        .flip_sign_at(y)?
        .hadamard_all();
    state.probability_of(alpha)
}

/// `4/4ⁿ`.
pub fn single_reflection_baseline_ratio(n: u32) -> BigRational {
    BigRational::new(BigInt::from(4), BigInt::from(4).pow(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn support_has_half_the_basis() {
        for n in 2..=8 {
            for alpha in [1u64, 3, (1 << n) - 1] {
                assert_eq!(
                    oracle_support(n, BasisIndex(alpha)).unwrap().len(),
                    1 << (n - 1)
                );
            }
        }
    }

    #[test]
    fn noiseless_limit_is_phase_oracle() {
        let n = 4;
        let alpha = BasisIndex(0b1010);
        let none = NoiseRealization::new(n, alpha, []).unwrap();
        let u = StateVector::uniform(n).unwrap();
        let a = noisy_oracle(u.clone(), &none).unwrap();
        let b = u.phase_oracle(alpha).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn never_fired_is_identity() {
        let n = 4;
        let alpha = BasisIndex(6);
        let all = NoiseRealization::new(n, alpha, oracle_support(n, alpha).unwrap()).unwrap();
        let u = StateVector::uniform(n).unwrap();
        assert_eq!(noisy_oracle(u.clone(), &all).unwrap(), u);
    }

    #[test]
    fn sign_bookkeeping_three_qubits() {
        let r = NoiseRealization::new(3, BasisIndex(1), [1, 3]).unwrap();
        let out = noisy_oracle(StateVector::uniform(3).unwrap(), &r).unwrap();
        let a = 8f64.sqrt().recip();
        for x in 0..8u64 {
            let expected = if x == 5 || x == 7 { -a } else { a };
            assert_abs_diff_eq!(
                out.amplitude(BasisIndex(x)).unwrap(),
                expected,
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(out.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn realization_validation() {
        assert_eq!(
            NoiseRealization::new(3, BasisIndex(0), []),
            Err(Error::ZeroAlpha)
        );
        assert_eq!(
            NoiseRealization::new(3, BasisIndex(1), [2]),
            Err(Error::NotOnOracleSupport { y: 2, alpha: 1 })
        );
        assert!(NoiseRealization::new(3, BasisIndex(1), [9]).is_err());
        assert!(NoiseRealization::new(1, BasisIndex(1), []).is_err());
        let r = NoiseRealization::new(3, BasisIndex(1), []).unwrap();
        assert_eq!(
            noisy_oracle(StateVector::uniform(4).unwrap(), &r),
            Err(Error::QubitMismatch(4, 3))
        );
    }

    #[test]
    fn fixed_half_gives_a_quarter() {
        for seed in 0..20 {
            let res = bv_run(4, BasisIndex(5), NoiseModel::FixedHalf, seed).unwrap();
            assert_eq!(res.realization.unflipped_count(), 4);
            assert_abs_diff_eq!(res.success_probability, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn noiseless_run_always_succeeds() {
        let res = bv_run(6, BasisIndex(37), NoiseModel::Noiseless, 0).unwrap();
        assert_abs_diff_eq!(res.success_probability, 1.0, epsilon = 1e-12);
        assert_eq!(
            bv_run(4, BasisIndex(0), NoiseModel::Noiseless, 0).unwrap_err(),
            Error::ZeroAlpha
        );
    }

    #[test]
    fn runs_are_reproducible() {
        let a = bv_run(6, BasisIndex(9), NoiseModel::Independent, 77).unwrap();
        let b = bv_run(6, BasisIndex(9), NoiseModel::Independent, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_success_edges() {
        assert_abs_diff_eq!(bv_exact_success(5, 8).unwrap(), 0.25, epsilon = 1e-15);
        assert_eq!(bv_exact_success(5, 0).unwrap(), 1.0);
        assert_eq!(bv_exact_success(5, 16).unwrap(), 0.0);
        assert!(matches!(
            bv_exact_success(5, 17),
            Err(Error::CountOutOfRange { .. })
        ));
        assert_eq!(
            bv_exact_success_ratio(5, 8).unwrap(),
            BigRational::new(1.into(), 4.into())
        );
    }

    #[test]
    fn exhaustive_mean_three_qubits() {
        // Binomial oracle: Σ_k C(4,k)(1 − k/4)² / 16.
        let by_hand: f64 = (0..=4u64)
            .map(|k| {
                let c = [1.0, 4.0, 6.0, 4.0, 1.0][k as usize];
                c * (1.0 - k as f64 / 4.0).powi(2)
            })
            .sum::<f64>()
            / 16.0;
        assert_abs_diff_eq!(by_hand, 0.3125, epsilon = 1e-15);
        let mean = independent_mean_exhaustive(3, BasisIndex(1)).unwrap();
        assert_abs_diff_eq!(mean, by_hand, epsilon = 1e-12);
        assert!(matches!(
            NoiseRealization::enumerate_all(6, BasisIndex(1)),
            Err(Error::ExhaustiveTooLarge(32))
        ));
    }

    #[test]
    fn baseline_values() {
        assert_abs_diff_eq!(
            single_reflection_baseline(3, BasisIndex(1), BasisIndex(1)).unwrap(),
            0.0625,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            single_reflection_baseline(2, BasisIndex(1), BasisIndex(1)).unwrap(),
            0.25,
            epsilon = 1e-12
        );
        for y in oracle_support(3, BasisIndex(5)).unwrap() {
            assert_abs_diff_eq!(
                single_reflection_baseline(3, BasisIndex(5), BasisIndex(y)).unwrap(),
                0.0625,
                epsilon = 1e-12
            );
        }
        assert!(matches!(
            single_reflection_baseline(3, BasisIndex(1), BasisIndex(2)),
            Err(Error::NotOnOracleSupport { .. })
        ));
        assert_eq!(
            single_reflection_baseline_ratio(3),
            BigRational::new(1.into(), 16.into())
        );
    }
}
