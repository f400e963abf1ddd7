//! The Grover stopping game.
//!
//! A random stream of the reflections `Â` (sign flip at the target `α`) and
//! `B̂` (reflection about the uniform state `|ψ⟩`) is applied to `|ψ⟩`, newest
//! operator on the left. The player watches the stream and picks when to
//! measure.
//!
//! Both letters square to the identity and `B̂|ψ⟩ = |ψ⟩`, so any prefix of the
//! stream collapses to an alternating word ending in `Â`:
//!
//! ```text
//! ℓ = 2j     (B̂Â)^j |ψ⟩
//! ℓ = 2j+1   Â(B̂Â)^j |ψ⟩
//! ```
//!
//! The reduced word is therefore a single integer, and it performs a walk on
//! `{0, 1, 2, …}` that moves ±1 with equal odds and holds at 0 half the time.
//! `B̂Â` is the Grover iterate, so stopping when `ℓ = 2k` yields `k` Grover
//! iterations.

use rand::Rng;
use rayon::prelude::*;

use crate::statevec::{BasisIndex, StateVector};
use crate::{seeded_rng, trial_seeds, Error, Result};

/// Hard limit on letters consumed by one play.
pub const LETTER_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Sign flip at the target.
    A,
    /// Reflection about the uniform state.
    B,
}

impl Letter {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.random::<bool>() {
            Letter::A
        } else {
            Letter::B
        }
    }
}

/// Canonical form of a letter stream acting on `|ψ⟩`, identified by its
/// length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ReducedWord {
    length: u64,
}

impl ReducedWord {
    pub const EMPTY: ReducedWord = ReducedWord { length: 0 };

    pub fn with_length(length: u64) -> Self {
        Self { length }
    }

    pub fn length(self) -> u64 {
        self.length
    }

    /// Number of complete `B̂Â` pairs.
    pub fn grover_iterations(self) -> u64 {
        self.length / 2
    }

    /// Odd words carry one extra leading `Â`.
    pub fn has_leading_flip(self) -> bool {
        self.length % 2 == 1
    }

    /// Prepends `letter` and reduces.
    pub fn push(self, letter: Letter) -> Self {
        let l = self.length;
        let length = match (l.is_multiple_of(2), letter) {
            // Leftmost letter is B̂ (or the word is empty).
            (true, Letter::A) => l + 1,
            (true, Letter::B) => l.saturating_sub(1),
            // Leftmost letter is Â.
            (false, Letter::A) => l - 1,
            (false, Letter::B) => l + 1,
        };
        Self { length }
    }

    /// The letters of the word, leftmost first.
    pub fn letters(self) -> Vec<Letter> {
        (0..self.length)
            .map(|i| {
                if (self.length - i) % 2 == 1 {
                    Letter::A
                } else {
                    Letter::B
                }
            })
            .collect()
    }
}

pub fn reduce_push(word: ReducedWord, letter: Letter) -> ReducedWord {
    word.push(letter)
}

/// Applies one letter to a state, `α` being the marked index.
pub fn apply_letter(state: StateVector, letter: Letter, alpha: BasisIndex) -> Result<StateVector> {
    match letter {
        Letter::A => state.flip_sign_at(alpha),
        Letter::B => Ok(state.diffusion()),
    }
}

fn check_qubits(n: u32) -> Result<()> {
    if n < 2 {
        Err(Error::TooFewQubits { n, min: 2 })
    } else {
        Ok(())
    }
}

/// The reduced word applied to the uniform state.
pub fn realize_word(word: ReducedWord, n: u32, alpha: BasisIndex) -> Result<StateVector> {
    check_qubits(n)?;
    let mut state = StateVector::uniform(n)?;
    // Validate α even for the empty word.
    state.amplitude(alpha)?;
    for _ in 0..word.grover_iterations() {
        state = state.flip_sign_at(alpha)?.diffusion();
    }
    if word.has_leading_flip() {
        state = state.flip_sign_at(alpha)?;
    }
    Ok(state)
}

/// `sin²((2k+1)·arcsin(2^{−n/2}))`.
pub fn success_after_k(n: u32, k: u64) -> f64 {
    let theta = (2f64).powf(-(n as f64) / 2.0).asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// `⌈π·√(2ⁿ)/4⌉`, snapping to the nearest integer when within `1e−9` of it.
pub fn ceil_k(n: u32) -> u64 {
    let x = std::f64::consts::PI * (2f64).powf(n as f64 / 2.0) / 4.0;
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as u64
    } else {
        x.ceil() as u64
    }
}

/// The `k` maximizing [`success_after_k`], scanning `0..=ceil_k(n) + 2`.
pub fn best_k(n: u32) -> u64 {
    (0..=ceil_k(n) + 2)
        .map(|k| (k, success_after_k(n, k)))
        .fold(
            (0, f64::MIN),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        )
        .0
}

/// Stop the first time the reduced word reaches `(B̂Â)^target_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoppingStrategy {
    target_k: u64,
}

impl StoppingStrategy {
    pub fn new(target_k: u64) -> Result<Self> {
        if target_k == 0 {
            return Err(Error::InvalidTargetK);
        }
        Ok(Self { target_k })
    }

    pub fn target_k(self) -> u64 {
        self.target_k
    }

    pub fn target_length(self) -> u64 {
        2 * self.target_k
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlayRecord {
    /// Raw letters consumed before stopping, `m(k)`.
    pub stopping_index: u64,
    pub success_probability: f64,
    pub sequence_seed: u64,
    pub word: ReducedWord,
}

/// Draws letters from `rng` until the reduced word first has length
/// `target_length`, returning the number of letters consumed.
pub fn stopping_index<R: Rng + ?Sized>(target_length: u64, rng: &mut R) -> Result<u64> {
    let mut word = ReducedWord::EMPTY;
    let mut consumed = 0;
    while word.length() != target_length {
        if consumed == LETTER_CAP {
            return Err(Error::LetterCapExceeded(LETTER_CAP));
        }
        word = word.push(Letter::draw(rng));
        consumed += 1;
    }
    Ok(consumed)
}

/// Plays one game: letters are drawn from `seed`, the player stops at the
/// first hit of the target word, and the final state is measured.
pub fn play(
    n: u32,
    alpha: BasisIndex,
    strategy: StoppingStrategy,
    seed: u64,
) -> Result<PlayRecord> {
    check_qubits(n)?;
    let mut rng = seeded_rng(seed);
    let stopping_index = stopping_index(strategy.target_length(), &mut rng)?;
    let word = ReducedWord::with_length(strategy.target_length());
    let success_probability = realize_word(word, n, alpha)?.probability_of(alpha)?;
    Ok(PlayRecord {
        stopping_index,
        success_probability,
        sequence_seed: seed,
        word,
    })
}

/// Summary of stopping indices over independent plays.
#[derive(Debug, Clone, PartialEq)]
pub struct WaitingTimeStats {
    pub target_k: u64,
    /// Plays that reached the target.
    pub completed: usize,
    /// Plays aborted by [`LETTER_CAP`].
    pub cap_exceeded: usize,
    pub mean: f64,
    /// Unbiased sample variance; zero with fewer than two completed plays.
    pub variance: f64,
    pub max: u64,
}

/// Stopping indices of `trials` plays seeded from `seed`, in trial order.
pub fn waiting_times(target_k: u64, trials: usize, seed: u64) -> Vec<Result<u64>> {
    let target = 2 * target_k;
    trial_seeds(seed, trials)
        .into_par_iter()
        .map(|s| stopping_index(target, &mut seeded_rng(s)))
        .collect()
}

pub fn waiting_time_stats(target_k: u64, trials: usize, seed: u64) -> Result<WaitingTimeStats> {
    if trials == 0 {
        return Err(Error::NoSteps);
    }
    StoppingStrategy::new(target_k)?;
    let runs = waiting_times(target_k, trials, seed);
    let done: Vec<u64> = runs
        .iter()
        .filter_map(|r| r.as_ref().ok().copied())
        .collect();
    let cap_exceeded = runs.len() - done.len();
    let count = done.len() as f64;
    let mean = if done.is_empty() {
        0.0
    } else {
        done.iter().map(|&m| m as f64).sum::<f64>() / count
    };
    let variance = if done.len() < 2 {
        0.0
    } else {
        done.iter().map(|&m| (m as f64 - mean).powi(2)).sum::<f64>() / (count - 1.0)
    };
    Ok(WaitingTimeStats {
        target_k,
        completed: done.len(),
        cap_exceeded,
        mean,
        variance,
        max: done.iter().copied().max().unwrap_or(0),
    })
}
