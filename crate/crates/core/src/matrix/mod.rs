//! Dense matrices over a pluggable scalar, the one-sided scalings `R(A)` and
//! `C(A)`, diagonal scalings and permutations.

mod io;
mod perm;
mod scalar;

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numerics::Rounding;

pub use io::{parse_matrix, read_matrix_file, AnyMatrix};
pub use perm::{perm_compose, perm_matrix_apply, Permutation, Side};
pub use scalar::{Mode, Scalar};

/// Dense row-major matrix.
///
/// Construction only checks dimensions, so signed matrices can be built for
/// inspection; the scaling operators require strictly positive entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Positive diagonal matrix, stored as its diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalScaling<T> {
    values: Vec<T>,
}

impl<T: Scalar> DiagonalScaling<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !(*v > T::zero())) {
            return Err(Error::InvalidParameter(format!("diagonal entry {} is not positive", i + 1)));
        }
        Ok(Self { values })
    }

    pub fn ones(n: usize) -> Self {
        Self { values: vec![T::one(); n] }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Componentwise product; diagonal matrices commute.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!("diagonals of length {} and {}", self.len(), other.len())));
        }
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a.clone() * b.clone()).collect() })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DiagonalScaling<U> {
        DiagonalScaling { values: self.values.iter().map(f).collect() }
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        let n = self.len();
        Matrix::from_fn(n, n, |i, j| if i == j { self.values[i].clone() } else { T::zero() })
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Malformed(format!("empty {rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                rows[i].len()
            )));
        }
        Self::new(m, n, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// The `n×n` matrix with every entry `1/n`.
    pub fn uniform(n: usize) -> Self {
        let v = T::from_rational(&BigRational::new(1.into(), n.into()));
        Self::from_fn(n, n, |_, _| v.clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Zero-based access.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// First non-positive entry, reported 1-based.
    pub fn ensure_positive(&self) -> Result<()> {
        match self.data.iter().position(|v| !(*v > T::zero())) {
            Some(k) => Err(Error::NonPositive { row: k / self.cols + 1, col: k % self.cols + 1 }),
            None => Ok(()),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.ensure_positive().is_ok()
    }

    pub fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Row sums; signs are not checked.
    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows).map(|i| self.row(i).iter().fold(T::zero(), |acc, v| acc + v.clone())).collect()
    }

    /// Column sums; signs are not checked.
    pub fn col_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            for (s, v) in sums.iter_mut().zip(self.row(i)) {
                *s = s.clone() + v.clone();
            }
        }
        sums
    }

    /// `R(A) = X(A)·A` with `X(A) = diag(1/row_i)`.
    pub fn row_scale(&self) -> Result<(DiagonalScaling<T>, Matrix<T>)> {
        self.ensure_positive()?;
        let x = DiagonalScaling { values: self.row_sums().into_iter().map(|s| T::one() / s).collect() };
        let scaled = self.scale_rows(&x);
        Ok((x, scaled))
    }

    /// `C(A) = A·Y(A)` with `Y(A) = diag(1/col_j)`.
    pub fn col_scale(&self) -> Result<(DiagonalScaling<T>, Matrix<T>)> {
        self.ensure_positive()?;
        let y = DiagonalScaling { values: self.col_sums().into_iter().map(|s| T::one() / s).collect() };
        let scaled = self.scale_cols(&y);
        Ok((y, scaled))
    }

    /// `diag(x)·A`. Panics on a length mismatch.
    pub fn scale_rows(&self, x: &DiagonalScaling<T>) -> Self {
        assert_eq!(x.len(), self.rows, "row scaling length");
        Self::from_fn(self.rows, self.cols, |i, j| x.values[i].clone() * self.get(i, j).clone())
    }

    /// `A·diag(y)`. Panics on a length mismatch.
    pub fn scale_cols(&self, y: &DiagonalScaling<T>) -> Self {
        assert_eq!(y.len(), self.cols, "column scaling length");
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() * y.values[j].clone())
    }

    /// Largest deviation of any row or column sum from one.
    pub fn stochastic_residual(&self) -> T {
        self.row_sums()
            .into_iter()
            .chain(self.col_sums())
            .map(|s| (s - T::one()).abs())
            .fold(T::zero(), |acc, d| if d > acc { d } else { acc })
    }

    /// Square, with every row and column sum within `tol` of one.
    pub fn is_doubly_stochastic(&self, tol: &T) -> bool {
        self.is_square() && self.stochastic_residual() <= *tol
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scaled(&self, lambda: &T) -> Self {
        self.map(|v| lambda.clone() * v.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * other.get(k, j).clone())
        }))
    }

    /// Largest entrywise difference, as a float.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).abs().to_f64())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Rows of rendered entries, see [`Scalar::render`].
    pub fn render(&self, places: u32, rounding: Rounding) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|v| v.render(places, rounding)).collect()).collect()
    }
}

impl Matrix<BigRational> {
    /// Exact conversion of a float matrix.
    pub fn from_f64(m: &Matrix<f64>) -> Result<Self> {
        let data = m
            .data
            .iter()
            .map(|v| v.to_rational().ok_or_else(|| Error::Malformed(format!("non-finite entry {v}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m.rows, m.cols, data)
    }
}

/// Whitespace-aligned rendering with ten decimals for floats.
impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.render(10, Rounding::default());
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
        for (i, row) in cells.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            f.write_str(&line.join("  "))?;
        }
        Ok(())
    }
}

/// Distinct entry values in first-seen order.
pub(crate) fn distinct_values<T: Scalar>(m: &Matrix<T>, rel: f64) -> Vec<T> {
    let mut seen: Vec<T> = Vec::new();
    for v in m.entries() {
        if !seen.iter().any(|s| s.approx_eq(v, rel)) {
            seen.push(v.clone());
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    fn q(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn sums_of_small_matrix() {
        let a = q(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(a.row_sums(), vec![int(6), int(15)]);
        assert_eq!(a.col_sums(), vec![int(5), int(7), int(9)]);
        let signed = q(&[&[1, -1, 1], &[-1, 4, -2], &[1, -2, 2]]);
        assert_eq!(signed.row_sums(), vec![int(1); 3]);
        assert_eq!(signed.col_sums(), vec![int(1); 3]);
        assert!(signed.row_scale().is_err());
    }

    #[test]
    fn one_sided_scalings() {
        let a = q(&[&[1, 2, 3], &[4, 5, 6]]);
        let (x, r) = a.row_scale().unwrap();
        assert_eq!(x.values(), &[rat(1, 6), rat(1, 15)]);
        assert_eq!(r.row(0), &[rat(1, 6), rat(1, 3), rat(1, 2)]);
        assert_eq!(r.row(1), &[rat(4, 15), rat(1, 3), rat(2, 5)]);
        let (y, c) = a.col_scale().unwrap();
        assert_eq!(y.values(), &[rat(1, 5), rat(1, 7), rat(1, 9)]);
        assert_eq!(c.row(0), &[rat(1, 5), rat(2, 7), rat(1, 3)]);
        assert_eq!(c.row(1), &[rat(4, 5), rat(5, 7), rat(2, 3)]);
    }

    #[test]
    fn first_row_scaling_of_a6() {
        let a = q(&[&[2, 2, 1], &[2, 1, 1], &[1, 1, 1]]);
        let (_, r) = a.row_scale().unwrap();
        assert_eq!(*r.get(0, 2), rat(1, 5));
        assert_eq!(*r.get(1, 1), rat(1, 4));
        assert_eq!(*r.get(2, 0), rat(1, 3));
    }

    #[test]
    fn idempotent_scalings() {
        let a = q(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let (_, r) = a.row_scale().unwrap();
        let (x, rr) = r.row_scale().unwrap();
        assert_eq!(rr, r);
        assert_eq!(x, DiagonalScaling::ones(3));
        let (_, c) = a.col_scale().unwrap();
        assert_eq!(c.col_scale().unwrap().1, c);
        let u = q(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert_eq!(u.col_scale().unwrap().1, Matrix::uniform(3));
    }

    #[test]
    fn doubly_stochastic_checks() {
        let d = Matrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3), rat(1, 6)],
            vec![rat(1, 6), rat(1, 2), rat(1, 3)],
            vec![rat(1, 3), rat(1, 6), rat(1, 2)],
        ])
        .unwrap();
        assert!(d.is_doubly_stochastic(&int(0)));
        assert!(!q(&[&[1, 2], &[3, 4]]).is_doubly_stochastic(&rat(19, 10)));
        let wide = Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 4), rat(1, 4)], vec![rat(1, 3); 3]]).unwrap();
        assert!(!wide.is_doubly_stochastic(&int(1)));
        let f = Matrix::<f64>::uniform(4);
        assert!(f.is_doubly_stochastic(&f64::default_tolerance(4)));
    }

    #[test]
    fn dilation_invariance() {
        let a = q(&[&[3, 1], &[2, 7]]);
        let b = a.scaled(&rat(5, 3));
        assert_eq!(a.row_scale().unwrap().1, b.row_scale().unwrap().1);
        assert_eq!(a.col_scale().unwrap().1, b.col_scale().unwrap().1);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Matrix::from_rows(vec![vec![1.0, 2.0], vec![3.0]]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(Matrix::<f64>::from_rows(vec![]).is_err());
        let a = Matrix::from_rows(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(a.ensure_positive(), Err(Error::NonPositive { row: 1, col: 2 }));
    }

    #[test]
    fn display_aligns_columns() {
        let a = Matrix::from_rows(vec![vec![0.5, 0.25], vec![0.125, 1.0]]).unwrap();
        assert_eq!(a.to_string(), "0.5000000000  0.2500000000\n0.1250000000  1.0000000000");
    }
}
