//! Exact and Monte Carlo analysis of Parrondo-style games.
//!
//! Three families of games live here:
//!
//! * [`ring_games`]: classical rotating-wheel games. A robot turns a wheel by a
//!   uniformly random multiple of `2π/m`; the player wins a round when the
//!   pointer ends in the upper half. Single wheels with `m ≡ 3 (mod 4)` lose,
//!   while random mixtures of coprime wheels can win. Rates are computed as
//!   exact rationals from the stationary distribution of the position chain.
//! * [`bv_game`]: a Bernstein–Vazirani guessing game played with an oracle that
//!   only fires on half of the basis.
//! * [`grover_game`]: a stopping game over a random stream of the two Grover
//!   reflections, where the player chooses when to measure.
//!
//! Quantum games run on the small real-amplitude simulator in [`statevec`].

pub mod bv_game;
mod error;
pub mod grover_game;
pub mod ring_games;
pub mod statevec;

pub use error::{Error, Result};
pub use statevec::{BasisIndex, StateVector};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The generator behind every seeded experiment in this crate.
pub type ExperimentRng = ChaCha8Rng;

/// Builds the experiment generator for `seed`.
pub fn seeded_rng(seed: u64) -> ExperimentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Splits a master seed into `count` per-trial seeds.
///
/// The sequence depends only on `master`, so trial `i` sees the same seed no
/// matter how trials are scheduled.
pub fn trial_seeds(master: u64, count: usize) -> Vec<u64> {
    let mut rng = seeded_rng(master);
    (0..count).map(|_| rng.random()).collect()
}
