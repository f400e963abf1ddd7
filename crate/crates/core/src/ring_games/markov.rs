//! Finite Markov chains with exact rational transition probabilities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::modular::{self, CrtAccumulator, PrimeField};
use crate::{Error, Result};

/// Chains up to this size are solved by elimination; larger ones need a
/// doubly-stochastic certificate.
pub const DENSE_SOLVE_LIMIT: usize = 1024;

const MAX_SOLVE_PRIMES: usize = 24;

/// Row-stochastic matrix stored as sorted sparse rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    rows: Vec<Vec<(usize, BigRational)>>,
}

impl TransitionMatrix {
    /// Builds a matrix from sparse rows of `(column, probability)` pairs.
    ///
    /// Repeated columns within a row accumulate. Every row must sum to
    /// exactly one and every entry must be nonnegative.
    pub fn from_sparse_rows(rows: Vec<Vec<(usize, BigRational)>>) -> Result<Self> {
        let size = rows.len();
        let mut out = Vec::with_capacity(size);
        for (r, row) in rows.into_iter().enumerate() {
            let mut merged: BTreeMap<usize, BigRational> = BTreeMap::new();
            for (c, p) in row {
                if c >= size {
                    return Err(Error::IndexOutOfRange {
                        index: c as u64,
                        dim: size as u64,
                    });
                }
                *merged.entry(c).or_insert_with(BigRational::zero) += p;
            }
            if let Some((&c, _)) = merged.iter().find(|(_, p)| p.is_negative()) {
                return Err(Error::NegativeEntry { row: r, col: c });
            }
            merged.retain(|_, p| !p.is_zero());
            let sum: BigRational = merged.values().sum();
            if !sum.is_one() {
                return Err(Error::NotStochastic {
                    row: r,
                    sum: sum.to_string(),
                });
            }
            out.push(merged.into_iter().collect());
        }
        Ok(Self { rows: out })
    }

    /// Builds a circulant matrix whose row `j` is `first_row` shifted by `j`.
    pub fn circulant(size: usize, first_row: &[(usize, BigRational)]) -> Result<Self> {
        let rows = (0..size)
            .map(|j| {
                first_row
                    .iter()
                    .map(|(c, p)| ((j + c) % size, p.clone()))
                    .collect()
            })
            .collect();
        Self::from_sparse_rows(rows)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, BigRational)] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        match self.rows[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(_, p)| p).sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<BigRational> {
        let mut sums = vec![BigRational::zero(); self.size()];
        for row in &self.rows {
            for (c, p) in row {
                sums[*c] += p;
            }
        }
        sums
    }

    /// Rows and columns all sum to exactly one.
    pub fn is_doubly_stochastic(&self) -> bool {
        self.row_sums().iter().all(One::is_one) && self.column_sums().iter().all(One::is_one)
    }

    /// Every row is the first row cyclically shifted by its index.
    pub fn is_circulant(&self) -> bool {
        let n = self.size();
        self.rows.iter().enumerate().all(|(j, row)| {
            row.len() == self.rows[0].len()
                && self.rows[0]
                    .iter()
                    .all(|(c, p)| &self.entry(j, (j + c) % n) == p)
        })
    }

    /// The row vector `dist · P`.
    pub fn left_multiply(&self, dist: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.size()];
        for (w, row) in dist.iter().zip(&self.rows) {
            if w.is_zero() {
                continue;
            }
            for (c, p) in row {
                out[*c] += w * p;
            }
        }
        out
    }

    /// Number of closed communicating classes. The stationary distribution is
    /// unique exactly when this is one.
    pub fn closed_class_count(&self) -> usize {
        let adj: Vec<Vec<usize>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(c, _)| *c).collect())
            .collect();
        let comp = strongly_connected_components(&adj);
        let classes = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut closed = vec![true; classes];
        for (v, succ) in adj.iter().enumerate() {
            for &w in succ {
                if comp[v] != comp[w] {
                    closed[comp[v]] = false;
                }
            }
        }
        closed.into_iter().filter(|&c| c).count()
    }
}

/// Probability vector over chain states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    weights: Vec<BigRational>,
}

impl Distribution {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if let Some(i) = weights.iter().position(Signed::is_negative) {
            return Err(Error::NegativeEntry { row: 0, col: i });
        }
        let sum: BigRational = weights.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotStochastic {
                row: 0,
                sum: sum.to_string(),
            });
        }
        Ok(Self { weights })
    }

    pub fn uniform(size: usize) -> Self {
        let w = BigRational::new(BigInt::one(), BigInt::from(size));
        Self {
            weights: vec![w; size],
        }
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1])
    }

    /// Total weight on the given states.
    pub fn mass_on(&self, states: impl IntoIterator<Item = usize>) -> BigRational {
        states.into_iter().map(|s| &self.weights[s]).sum()
    }

    /// `self · P == self`, exactly.
    pub fn is_stationary_for(&self, matrix: &TransitionMatrix) -> bool {
        self.size() == matrix.size() && matrix.left_multiply(&self.weights) == self.weights
    }
}

/// Exact stationary distribution of an irreducible-on-its-closed-class chain.
///
/// Chains with at most [`DENSE_SOLVE_LIMIT`] states are solved by exact
/// elimination of `(Pᵀ − I)π = 0, Σπ = 1`. Larger chains are only accepted when
/// they are doubly stochastic, in which case the uniform vector is checked
/// against `πP = π` directly. Either way uniqueness comes from the
/// communicating-class structure, never from the candidate.
pub fn stationary_distribution(matrix: &TransitionMatrix) -> Result<Distribution> {
    if matrix.size() <= DENSE_SOLVE_LIMIT {
        solve_stationary_exact(matrix)
    } else {
        stationary_from_doubly_stochastic(matrix)
    }
}

/// Multi-modular elimination route. Each prime image of the bordered system
/// is solved densely, lifted by CRT and rational reconstruction, and the
/// first candidate that satisfies `πP = π` exactly is returned.
pub fn solve_stationary_exact(matrix: &TransitionMatrix) -> Result<Distribution> {
    let n = matrix.size();
    if n == 0 {
        return Err(Error::NotUnique(0));
    }
    let classes = matrix.closed_class_count();
    if classes != 1 {
        return Err(Error::NotUnique(classes));
    }

    let mut acc = CrtAccumulator::new(n);
    let mut used = 0;
    for p in modular::solve_primes().take(MAX_SOLVE_PRIMES) {
        let field = PrimeField::new(p);
        let Some(system) = bordered_system(field, matrix) else {
            continue;
        };
        let mut rhs = vec![0u64; n];
        rhs[n - 1] = 1;
        // Uniqueness is already established, so a singular image only means
        // this prime divides the determinant.
        let Some(image) = modular::solve_dense(field, system, rhs) else {
            continue;
        };
        acc.absorb(field, &image);
        used += 1;
        if let Some(candidate) = acc.reconstruct() {
            if let Ok(dist) = Distribution::new(candidate) {
                if dist.is_stationary_for(matrix) {
                    return Ok(dist);
                }
            }
        }
    }
    Err(Error::SolveFailed(used))
}

/// Certificate route: if every column sums to one, the uniform vector is
/// stationary, and it is the only one when there is a single closed class.
pub fn stationary_from_doubly_stochastic(matrix: &TransitionMatrix) -> Result<Distribution> {
    let n = matrix.size();
    let classes = matrix.closed_class_count();
    if classes != 1 {
        return Err(Error::NotUnique(classes));
    }
    if !matrix.column_sums().iter().all(One::is_one) {
        return Err(Error::SolveTooLarge(n));
    }
    let dist = Distribution::uniform(n);
    if !dist.is_stationary_for(matrix) {
        return Err(Error::SolveFailed(0));
    }
    Ok(dist)
}

/// `(Pᵀ − I)` with its last row replaced by ones, reduced mod p.
fn bordered_system(field: PrimeField, matrix: &TransitionMatrix) -> Option<Vec<Vec<u64>>> {
    let n = matrix.size();
    let mut a = vec![vec![0u64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = field.modulus() - 1;
    }
    for (r, row) in matrix.rows.iter().enumerate() {
        for (c, p) in row {
            let v = field.image_of(p)?;
            a[*c][r] = field.add(a[*c][r], v);
        }
    }
    a[n - 1].iter_mut().for_each(|v| *v = 1);
    Some(a)
}

/// Kosaraju's algorithm; returns the component id of every vertex.
fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut stack = vec![(start, 0usize)];
        while let Some(&(v, next)) = stack.last() {
            if next < adj[v].len() {
                stack.last_mut().unwrap().1 += 1;
                let w = adj[v][next];
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }

    let mut radj = vec![Vec::new(); n];
    for (v, succ) in adj.iter().enumerate() {
        for &w in succ {
            radj[w].push(v);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut next_id = 0;
    for &start in order.iter().rev() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next_id;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &radj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = next_id;
                    stack.push(w);
                }
            }
        }
        next_id += 1;
    }
    comp
}
