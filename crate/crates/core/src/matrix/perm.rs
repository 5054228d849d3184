use std::fmt;

use super::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Bijection σ of `{0, …, n−1}`, identified with the permutation matrix
/// `P_σ` whose `(i, σ(i))` entries are one.
///
/// `P_σ·A` moves row `σ(i)` of `A` to row `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

/// Which side a permutation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    /// From zero-based one-line notation.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{map:?} is not a bijection of 0..{n}")));
            }
            seen[v] = true;
        }
        Ok(Self { map })
    }

    /// From one-based one-line notation, e.g. `[2, 3, 1]`.
    pub fn from_one_based(map: &[usize]) -> Result<Self> {
        if map.contains(&0) {
            return Err(Error::InvalidPermutation("one-based entries start at 1".into()));
        }
        Self::new(map.iter().map(|v| v - 1).collect())
    }

    /// Single cycle in one-based notation: `(1, 2, 3)` sends 1→2→3→1.
    pub fn from_cycle(n: usize, cycle: &[usize]) -> Result<Self> {
        let mut map: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for (k, &c) in cycle.iter().enumerate() {
            if c == 0 || c > n || seen[c - 1] {
                return Err(Error::InvalidPermutation(format!("bad cycle {cycle:?} for n = {n}")));
            }
            seen[c - 1] = true;
            map[c - 1] = cycle[(k + 1) % cycle.len()] - 1;
        }
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// σ(i), zero-based.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.map.iter().map(|v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Self { map: inv }
    }

    /// The permutation whose matrix is `P_self · P_other`, namely
    /// `i ↦ other(self(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutations of size {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Self { map: self.map.iter().map(|&i| other.map[i]).collect() })
    }

    pub fn matrix<T: Scalar>(&self) -> Matrix<T> {
        let n = self.len();
        Matrix::from_fn(n, n, |i, j| if self.map[i] == j { T::one() } else { T::zero() })
    }

    /// `P_σ·A`.
    pub fn left_mul<T: Scalar>(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        if a.rows() != self.len() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix, permutation of {}", a.rows(), a.cols(), self.len())));
        }
        Ok(Matrix::from_fn(a.rows(), a.cols(), |i, j| a.get(self.map[i], j).clone()))
    }

    /// `A·P_σ`: column `σ(k)` of the result is column `k` of `A`.
    pub fn right_mul<T: Scalar>(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        if a.cols() != self.len() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix, permutation of {}", a.rows(), a.cols(), self.len())));
        }
        let inv = self.inverse();
        Ok(Matrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, inv.map[j]).clone()))
    }

    /// All permutations of size `n` in lexicographic order of one-line
    /// notation.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self { map: current.clone() });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("successor exists");
            current.swap(i - 1, j);
            current[i..].reverse();
        }
    }
}

/// Cycle notation, one-based; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.len()];
        let mut wrote = false;
        for start in 0..self.len() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.map[i];
            }
            write!(f, "({})", cycle.join(","))?;
            wrote = true;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Left: row `i` of the result is row `σ(i)` of `A`. Right (applies
/// `P_{σ⁻¹}`): column `j` of the result is column `σ(j)` of `A`.
pub fn perm_matrix_apply<T: Scalar>(sigma: &Permutation, a: &Matrix<T>, side: Side) -> Result<Matrix<T>> {
    match side {
        Side::Left => sigma.left_mul(a),
        Side::Right => sigma.inverse().right_mul(a),
    }
}

/// `P_σ·P_τ = P_{τσ}`.
pub fn perm_compose(sigma: &Permutation, tau: &Permutation) -> Result<Permutation> {
    sigma.compose(tau)
}
