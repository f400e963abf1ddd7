//! Dense linear algebra over prime fields, lifted back to the rationals with
//! the Chinese remainder theorem and rational reconstruction.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) const MERSENNE_61: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub(crate) fn new(p: u64) -> Self {
        debug_assert!(p < 1 << 62);
        Self { p }
    }

    pub(crate) fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub(crate) fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        if self.p == MERSENNE_61 {
            mul_mersenne(a, b)
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    pub(crate) fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub(crate) fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    pub(crate) fn reduce(self, value: &BigInt) -> u64 {
        let r = value.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }

    /// Image of a rational, or `None` when the denominator vanishes mod p.
    pub(crate) fn image_of(self, value: &BigRational) -> Option<u64> {
        let den = self.reduce(value.denom());
        if den == 0 {
            return None;
        }
        Some(self.mul(self.reduce(value.numer()), self.inv(den)))
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let field = PrimeField { p: n };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &w in &WITNESSES {
        let mut x = field.pow(w, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = field.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Large primes for the multi-modular solve: the Mersenne prime 2^61 − 1
/// first (fast reduction), then primes just below 2^62.
pub(crate) fn solve_primes() -> impl Iterator<Item = u64> {
    let below = (1u64..)
        .map(|i| (1u64 << 62) - 2 * i + 1)
        .filter(|&c| is_prime_u64(c));
    std::iter::once(MERSENNE_61).chain(below)
}

/// Solves `a · x = rhs` over the field with Gaussian elimination.
/// Returns `None` when `a` is singular mod p.
pub(crate) fn solve_dense(field: PrimeField, a: Vec<Vec<u64>>, rhs: Vec<u64>) -> Option<Vec<u64>> {
    if field.p == MERSENNE_61 {
        eliminate(field, mul_mersenne, a, rhs)
    } else {
        let p = field.p as u128;
        eliminate(
            field,
            move |x, y| ((x as u128 * y as u128) % p) as u64,
            a,
            rhs,
        )
    }
}

/// 2^61 ≡ 1, so the high bits fold onto the low ones.
#[inline(always)]
fn mul_mersenne(a: u64, b: u64) -> u64 {
    let prod = a as u128 * b as u128;
    let s = (prod as u64 & MERSENNE_61) + (prod >> 61) as u64;
    let s = (s & MERSENNE_61) + (s >> 61);
    if s >= MERSENNE_61 {
        s - MERSENNE_61
    } else {
        s
    }
}

fn eliminate<F>(
    field: PrimeField,
    mul: F,
    mut a: Vec<Vec<u64>>,
    mut rhs: Vec<u64>,
) -> Option<Vec<u64>>
where
    F: Fn(u64, u64) -> u64 + Copy,
{
    let n = a.len();
    let p = field.p;
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        rhs.swap(col, pivot);

        let inv = field.inv(a[col][col]);
        for v in a[col][col..].iter_mut() {
            *v = mul(*v, inv);
        }
        rhs[col] = mul(rhs[col], inv);

        let (upper, lower) = a.split_at_mut(col + 1);
        let pivot_row = &upper[col][col..];
        let pivot_rhs = rhs[col];
        for (offset, row) in lower.iter_mut().enumerate() {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            // dst − f·src  ≡  dst + (p − f)·src
            let neg = p - factor;
            for (dst, &src) in row[col..].iter_mut().zip(pivot_row) {
                let s = *dst + mul(neg, src);
                *dst = if s >= p { s - p } else { s };
            }
            let r = col + 1 + offset;
            rhs[r] = field.sub(rhs[r], mul(factor, pivot_rhs));
        }
    }

    let mut x = vec![0u64; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in row + 1..n {
            if a[row][c] != 0 {
                acc = field.sub(acc, mul(a[row][c], x[c]));
            }
        }
        x[row] = acc;
    }
    Some(x)
}

/// Residues of a vector modulo a growing product of primes.
#[derive(Debug, Clone)]
pub(crate) struct CrtAccumulator {
    modulus: BigInt,
    residues: Vec<BigInt>,
}

impl CrtAccumulator {
    pub(crate) fn new(len: usize) -> Self {
        Self {
            modulus: BigInt::one(),
            residues: vec![BigInt::zero(); len],
        }
    }

    pub(crate) fn absorb(&mut self, field: PrimeField, image: &[u64]) {
        let p = BigInt::from(field.modulus());
        let m_inv = field.inv(field.reduce(&self.modulus));
        for (r, &x) in self.residues.iter_mut().zip(image) {
            let delta = field.mul(field.sub(x, field.reduce(r)), m_inv);
            *r += &self.modulus * BigInt::from(delta);
        }
        self.modulus *= p;
    }

    pub(crate) fn reconstruct(&self) -> Option<Vec<BigRational>> {
        self.residues
            .iter()
            .map(|r| rational_reconstruction(r, &self.modulus))
            .collect()
    }
}

/// Finds `a/b` with `a ≡ b·u (mod m)` and `|a|, b ≤ √(m/2)`, if one exists.
pub(crate) fn rational_reconstruction(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    Some(BigRational::new(num, den))
}
