//! Real-amplitude state vectors over `n` qubits.
//!
//! Every operator the games need (the Hadamard layer, diagonal sign oracles
//! and the reflection about the uniform state) is real orthogonal, so
//! amplitudes are stored as `f64`. Operations take the state by value and
//! work in place.

use crate::{Error, Result};

pub const MAX_QUBITS: u32 = 24;

/// Tolerance for norm and involution checks.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// A computational basis label, read as a bit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex(pub u64);

impl BasisIndex {
    /// Bitwise inner product mod 2.
    pub fn dot(self, other: BasisIndex) -> u32 {
        (self.0 & other.0).count_ones() & 1
    }
}

impl From<u64> for BasisIndex {
    fn from(value: u64) -> Self {
        BasisIndex(value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: u32,
    amplitudes: Vec<f64>,
}

fn check_qubits(n: u32) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::QubitsOutOfRange(n))
    }
}

impl StateVector {
    /// `|ψ⟩ = 2^(−n/2) Σ_x |x⟩`.
    pub fn uniform(n: u32) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let amp = (dim as f64).sqrt().recip();
        Ok(Self {
            qubits: n,
            amplitudes: vec![amp; dim],
        })
    }

    pub fn basis(n: u32, x: BasisIndex) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1u64 << n;
        if x.0 >= dim {
            return Err(Error::IndexOutOfRange { index: x.0, dim });
        }
        let mut amplitudes = vec![0.0; dim as usize];
        amplitudes[x.0 as usize] = 1.0;
        Ok(Self {
            qubits: n,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes; the length must be `2ⁿ` and the norm one.
    pub fn from_amplitudes(amplitudes: Vec<f64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::BadLength(len));
        }
        let qubits = len.trailing_zeros();
        check_qubits(qubits)?;
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { qubits, amplitudes })
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn dim(&self) -> u64 {
        self.amplitudes.len() as u64
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    fn check_index(&self, x: BasisIndex) -> Result<usize> {
        if x.0 >= self.dim() {
            Err(Error::IndexOutOfRange {
                index: x.0,
                dim: self.dim(),
            })
        } else {
            Ok(x.0 as usize)
        }
    }

    pub fn amplitude(&self, x: BasisIndex) -> Result<f64> {
        Ok(self.amplitudes[self.check_index(x)?])
    }

    /// Born probability of measuring `x`.
    pub fn probability_of(&self, x: BasisIndex) -> Result<f64> {
        let a = self.amplitude(x)?;
        Ok(a * a)
    }

    /// `H^{⊗n}` as an in-place fast Walsh–Hadamard transform with a `1/√2`
    /// factor on every butterfly layer.
    pub fn hadamard_all(mut self) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let dim = self.amplitudes.len();
        let mut half = 1;
        while half < dim {
            for block in self.amplitudes.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (u, v) = (*a, *b);
                    *a = (u + v) * s;
                    *b = (u - v) * s;
                }
            }
            half *= 2;
        }
        self
    }

    /// `|x⟩ ↦ (−1)^{x·α} |x⟩`.
    pub fn phase_oracle(mut self, alpha: BasisIndex) -> Result<Self> {
        self.check_index(alpha)?;
        for (x, a) in self.amplitudes.iter_mut().enumerate() {
            if BasisIndex(x as u64).dot(alpha) == 1 {
                *a = -*a;
            }
        }
        Ok(self)
    }

    /// Negates the amplitude at `y` only.
    pub fn flip_sign_at(mut self, y: BasisIndex) -> Result<Self> {
        let i = self.check_index(y)?;
        self.amplitudes[i] = -self.amplitudes[i];
        Ok(self)
    }

    /// Reflection about the uniform state, `2|ψ⟩⟨ψ| − I`: every amplitude
    /// `a_x` becomes `2ā − a_x` with `ā` the mean amplitude.
    pub fn diffusion(mut self) -> Self {
        let mean = self.amplitudes.iter().sum::<f64>() / self.amplitudes.len() as f64;
        let twice = 2.0 * mean;
        for a in &mut self.amplitudes {
            *a = twice - *a;
        }
        self
    }

    /// Largest componentwise difference to another state of the same size.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "state dimensions differ");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_amps(state: &StateVector, expected: &[f64]) {
        assert_eq!(state.amplitudes().len(), expected.len());
        for (a, e) in state.amplitudes().iter().zip(expected) {
            assert_abs_diff_eq!(*a, *e, epsilon = 1e-12);
        }
    }

    #[test]
    fn uniform_states() {
        let s = StateVector::uniform(1).unwrap();
        assert_amps(&s, &[std::f64::consts::FRAC_1_SQRT_2; 2]);
        let s = StateVector::uniform(2).unwrap();
        assert_amps(&s, &[0.5; 4]);
        assert_abs_diff_eq!(
            StateVector::uniform(7).unwrap().norm_sqr(),
            1.0,
            epsilon = 1e-12
        );
        assert_eq!(StateVector::uniform(0), Err(Error::QubitsOutOfRange(0)));
        assert_eq!(StateVector::uniform(25), Err(Error::QubitsOutOfRange(25)));
    }

    #[test]
    fn basis_states() {
        assert_amps(
            &StateVector::basis(2, BasisIndex(0)).unwrap(),
            &[1.0, 0.0, 0.0, 0.0],
        );
        assert_amps(
            &StateVector::basis(2, BasisIndex(3)).unwrap(),
            &[0.0, 0.0, 0.0, 1.0],
        );
        assert!(matches!(
            StateVector::basis(2, BasisIndex(4)),
            Err(Error::IndexOutOfRange { index: 4, dim: 4 })
        ));
    }

    #[test]
    fn hadamard_single_qubit() {
        let h = StateVector::basis(1, BasisIndex(0)).unwrap().hadamard_all();
        assert_amps(&h, &[std::f64::consts::FRAC_1_SQRT_2; 2]);
        let minus = StateVector::from_amplitudes(vec![
            std::f64::consts::FRAC_1_SQRT_2,
            -std::f64::consts::FRAC_1_SQRT_2,
        ])
        .unwrap();
        assert_amps(&minus.hadamard_all(), &[0.0, 1.0]);
    }

    #[test]
    fn hadamard_of_zero_is_uniform() {
        for n in 1..=8 {
            let h = StateVector::basis(n, BasisIndex(0)).unwrap().hadamard_all();
            assert!(h.max_abs_diff(&StateVector::uniform(n).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn phase_oracle_examples() {
        let u = StateVector::uniform(2).unwrap();
        assert_amps(&u.clone().phase_oracle(BasisIndex(0)).unwrap(), &[0.5; 4]);
        assert_amps(
            &u.clone().phase_oracle(BasisIndex(3)).unwrap(),
            &[0.5, -0.5, -0.5, 0.5],
        );
        assert!(u.phase_oracle(BasisIndex(4)).is_err());
    }

    #[test]
    fn flip_sign_examples() {
        let e0 = StateVector::basis(3, BasisIndex(0)).unwrap();
        let flipped = e0.flip_sign_at(BasisIndex(0)).unwrap();
        assert_eq!(flipped.amplitude(BasisIndex(0)).unwrap(), -1.0);
        let u = StateVector::uniform(2).unwrap();
        assert_amps(
            &u.flip_sign_at(BasisIndex(1)).unwrap(),
            &[0.5, -0.5, 0.5, 0.5],
        );
    }

    #[test]
    fn diffusion_examples() {
        for n in 1..=6 {
            let u = StateVector::uniform(n).unwrap();
            assert!(u.clone().diffusion().max_abs_diff(&u) < 1e-12);
        }
        let e0 = StateVector::basis(2, BasisIndex(0)).unwrap();
        assert_amps(&e0.diffusion(), &[-0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn probabilities() {
        let u = StateVector::uniform(5).unwrap();
        assert_abs_diff_eq!(
            u.probability_of(BasisIndex(17)).unwrap(),
            1.0 / 32.0,
            epsilon = 1e-15
        );
        let e = StateVector::basis(3, BasisIndex(6)).unwrap();
        assert_eq!(e.probability_of(BasisIndex(6)).unwrap(), 1.0);
        assert!(e.probability_of(BasisIndex(8)).is_err());
    }

    #[test]
    fn from_amplitudes_validation() {
        assert_eq!(
            StateVector::from_amplitudes(vec![1.0, 0.0, 0.0]),
            Err(Error::BadLength(3))
        );
        assert!(matches!(
            StateVector::from_amplitudes(vec![1.0, 1.0]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn dot_is_parity() {
        assert_eq!(BasisIndex(0b1011).dot(BasisIndex(0b0011)), 0);
        assert_eq!(BasisIndex(0b1011).dot(BasisIndex(0b1000)), 1);
        assert_eq!(BasisIndex(5).dot(BasisIndex(0)), 0);
    }
}
