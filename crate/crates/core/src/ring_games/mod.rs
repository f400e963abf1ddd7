//! Rotating-wheel games.
//!
//! A wheel with modulus `m` is turned by `2πa/m` for a uniformly random
//! `a ∈ {0, …, m−1}`. Several wheels with pairwise coprime moduli can be
//! combined by picking one of them uniformly at random each round; positions
//! then live on `Z_M` with `M` the product of the moduli, and wheel `i` moves
//! by multiples of `M/m_i`.
//!
//! A round is won when the pointer lands in the open upper half of the wheel,
//! `cos(2πj/M) > 0`. For odd `M` no position sits on the horizontal axis, so
//! this agrees with the closed half-plane. The payoff is +1 per win and −1 per
//! loss, so the long-run rate is `2·p_win − 1`.

mod markov;
mod modular;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

pub use markov::{
    solve_stationary_exact, stationary_distribution, stationary_from_doubly_stochastic,
    Distribution, TransitionMatrix, DENSE_SOLVE_LIMIT,
};

use crate::{seeded_rng, Error, Result};

/// Largest combined state space accepted.
pub const MAX_POSITIONS: u64 = 1 << 20;

/// A single wheel that rotates by a uniform multiple of `2π/modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RotationGame {
    modulus: u64,
}

impl RotationGame {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 3 {
            return Err(Error::ModulusTooSmall(modulus));
        }
        if modulus.is_multiple_of(2) {
            return Err(Error::EvenModulus(modulus));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }
}

/// Wheels picked uniformly at random each round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedRingGame {
    games: Vec<RotationGame>,
    modulus_product: u64,
}

impl CombinedRingGame {
    pub fn new(games: Vec<RotationGame>) -> Result<Self> {
        if games.is_empty() {
            return Err(Error::EmptyCombination);
        }
        for (i, a) in games.iter().enumerate() {
            for b in &games[i + 1..] {
                let g = a.modulus.gcd(&b.modulus);
                if g != 1 {
                    return Err(Error::NotCoprime(a.modulus, b.modulus, g));
                }
            }
        }
        let product = games
            .iter()
            .try_fold(1u128, |acc, g| acc.checked_mul(g.modulus as u128))
            .unwrap_or(u128::MAX);
        if product > MAX_POSITIONS as u128 {
            return Err(Error::StateSpaceTooLarge(product, MAX_POSITIONS));
        }
        Ok(Self {
            games,
            modulus_product: product as u64,
        })
    }

    pub fn from_moduli(moduli: &[u64]) -> Result<Self> {
        let games = moduli
            .iter()
            .map(|&m| RotationGame::new(m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(games)
    }

    pub fn single(game: RotationGame) -> Self {
        Self {
            games: vec![game],
            modulus_product: game.modulus,
        }
    }

    pub fn games(&self) -> &[RotationGame] {
        &self.games
    }

    /// Number of wheel positions `M`.
    pub fn modulus_product(&self) -> u64 {
        self.modulus_product
    }

    /// Distance in `Z_M` that wheel `game` covers per unit step.
    fn stride(&self, game: usize) -> u64 {
        self.modulus_product / self.games[game].modulus
    }

    /// Displacement distribution of one round, as `(offset, probability)`
    /// pairs sorted by offset. Offsets hit by several wheels accumulate.
    pub fn step_distribution(&self) -> Vec<(usize, BigRational)> {
        let count = self.games.len() as u64;
        let mut steps: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (i, game) in self.games.iter().enumerate() {
            let weight = BigRational::new(BigInt::one(), BigInt::from(count * game.modulus));
            let stride = self.stride(i);
            for a in 0..game.modulus {
                *steps
                    .entry((stride * a) as usize)
                    .or_insert_with(BigRational::zero) += &weight;
            }
        }
        steps.into_iter().collect()
    }
}

/// A wheel angle `2π·index/modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingPosition {
    index: u64,
    modulus: u64,
}

impl RingPosition {
    pub fn new(index: u64, modulus: u64) -> Result<Self> {
        if index >= modulus {
            return Err(Error::IndexOutOfRange {
                index,
                dim: modulus,
            });
        }
        Ok(Self { index, modulus })
    }

    pub fn index(self) -> u64 {
        self.index
    }

    pub fn angle(self) -> f64 {
        std::f64::consts::TAU * self.index as f64 / self.modulus as f64
    }

    pub fn is_winning(self) -> bool {
        is_winning(self.index, self.modulus)
    }
}

/// `cos(2πj/M) > 0`, decided in integers: `4j < M` or `4j > 3M`.
#[inline]
pub fn is_winning(j: u64, modulus: u64) -> bool {
    let four_j = 4 * j as u128;
    let m = modulus as u128;
    four_j < m || four_j > 3 * m
}

fn check_odd_modulus(modulus: u64) -> Result<()> {
    if modulus < 3 {
        Err(Error::ModulusTooSmall(modulus))
    } else if modulus.is_multiple_of(2) {
        Err(Error::EvenModulus(modulus))
    } else {
        Ok(())
    }
}

/// Indices `j ∈ Z_M` whose angle lies in the upper half of the wheel.
pub fn winning_positions(modulus: u64) -> Result<Vec<u64>> {
    check_odd_modulus(modulus)?;
    Ok((0..modulus).filter(|&j| is_winning(j, modulus)).collect())
}

/// Exact long-run statistics of a wheel game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateReport {
    pub win_probability: BigRational,
    /// `win_probability − lose_probability`.
    pub rate: BigRational,
    pub winning_count: usize,
}

impl RateReport {
    fn from_win_probability(win_probability: BigRational, winning_count: usize) -> Self {
        let rate = &win_probability * BigInt::from(2) - BigRational::one();
        Self {
            win_probability,
            rate,
            winning_count,
        }
    }
}

/// Rate of a chain on `Z_M` under a given distribution.
pub fn rate_under(distribution: &Distribution) -> Result<RateReport> {
    let modulus = distribution.size() as u64;
    let winners = winning_positions(modulus)?;
    let p = distribution.mass_on(winners.iter().map(|&j| j as usize));
    Ok(RateReport::from_win_probability(p, winners.len()))
}

/// Exact rate of a single wheel played on its own.
pub fn single_game_rate(game: RotationGame) -> Result<RateReport> {
    combined_rate(&CombinedRingGame::single(game))
}

/// The `M × M` transition matrix of the combined game. It is circulant.
pub fn transition_matrix(combined: &CombinedRingGame) -> TransitionMatrix {
    TransitionMatrix::circulant(
        combined.modulus_product as usize,
        &combined.step_distribution(),
    )
    .expect("step distribution sums to one")
}

/// Exact long-run rate of the combined game from its stationary distribution.
pub fn combined_rate(combined: &CombinedRingGame) -> Result<RateReport> {
    let matrix = transition_matrix(combined);
    let pi = stationary_distribution(&matrix)?;
    rate_under(&pi)
}

/// Wheel position driven one rotation at a time.
#[derive(Debug, Clone)]
pub struct RingWalk<'a> {
    game: &'a CombinedRingGame,
    position: u64,
}

impl<'a> RingWalk<'a> {
    pub fn new(game: &'a CombinedRingGame) -> Self {
        Self { game, position: 0 }
    }

    pub fn position(&self) -> RingPosition {
        RingPosition {
            index: self.position,
            modulus: self.game.modulus_product,
        }
    }

    /// Rotates with wheel `game` by `steps` units; returns whether the round
    /// is won.
    pub fn rotate(&mut self, game: usize, steps: u64) -> bool {
        let m = self.game.modulus_product;
        let delta = (self.game.stride(game) * (steps % self.game.games[game].modulus)) % m;
        self.position = (self.position + delta) % m;
        is_winning(self.position, m)
    }

    /// Picks a wheel and a rotation uniformly and plays one round.
    pub fn play_round<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let game = rng.random_range(0..self.game.games.len());
        let steps = rng.random_range(0..self.game.games[game].modulus);
        self.rotate(game, steps)
    }
}

/// Outcome of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalReport {
    pub steps: u64,
    pub wins: u64,
    pub win_frequency: f64,
    pub rate: f64,
    /// `√(p̂(1 − p̂)/steps)`.
    pub standard_error: f64,
}

/// Plays `steps` rounds from position 0 with a generator seeded by `seed`.
pub fn simulate_ring(
    combined: &CombinedRingGame,
    steps: u64,
    seed: u64,
) -> Result<EmpiricalReport> {
    if steps == 0 {
        return Err(Error::NoSteps);
    }
    let mut rng = seeded_rng(seed);
    let mut walk = RingWalk::new(combined);
    let wins = (0..steps).filter(|_| walk.play_round(&mut rng)).count() as u64;
    let p = wins as f64 / steps as f64;
    Ok(EmpiricalReport {
        steps,
        wins,
        win_frequency: p,
        rate: 2.0 * p - 1.0,
        standard_error: (p * (1.0 - p) / steps as f64).sqrt(),
    })
}
