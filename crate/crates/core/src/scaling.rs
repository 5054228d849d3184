//! Alternate row/column scaling.
//!
//! Step `ℓ` of a trace is the matrix after `ℓ` elementary scalings, starting
//! with a row scaling: odd steps are row stochastic, even steps column
//! stochastic.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{DiagonalScaling, Matrix, Scalar};
use crate::numerics::Rounding;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Row,
    Column,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Row => "row",
            StepKind::Column => "column",
        }
    }
}

/// The iterates `A_1, A_2, …` with the scalings accumulated up to each one.
#[derive(Debug, Clone)]
pub struct IterationTrace<T> {
    original: Matrix<T>,
    snapshots: Vec<Matrix<T>>,
    kinds: Vec<StepKind>,
    accumulated: Vec<(DiagonalScaling<T>, DiagonalScaling<T>)>,
}

impl<T: Scalar> IterationTrace<T> {
    pub fn original(&self) -> &Matrix<T> {
        &self.original
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn snapshots(&self) -> &[Matrix<T>] {
        &self.snapshots
    }

    /// Snapshot `ℓ`, one-based to match step numbering.
    pub fn snapshot(&self, step: usize) -> Option<&Matrix<T>> {
        step.checked_sub(1).and_then(|i| self.snapshots.get(i))
    }

    pub fn step_kinds(&self) -> &[StepKind] {
        &self.kinds
    }

    /// `(X, Y)` with `snapshot(ℓ) = X·A·Y`, one-based.
    pub fn scalings_at(&self, step: usize) -> Option<&(DiagonalScaling<T>, DiagonalScaling<T>)> {
        step.checked_sub(1).and_then(|i| self.accumulated.get(i))
    }

    /// Accumulated row scaling after the last step.
    pub fn accumulated_x(&self) -> DiagonalScaling<T> {
        self.accumulated.last().map_or_else(|| DiagonalScaling::ones(self.original.rows()), |(x, _)| x.clone())
    }

    /// Accumulated column scaling after the last step.
    pub fn accumulated_y(&self) -> DiagonalScaling<T> {
        self.accumulated.last().map_or_else(|| DiagonalScaling::ones(self.original.cols()), |(_, y)| y.clone())
    }

    pub fn last(&self) -> &Matrix<T> {
        self.snapshots.last().unwrap_or(&self.original)
    }

    /// One object per step: `{index, kind, entries, row_sums, col_sums}`.
    pub fn to_json(&self, places: u32, rounding: Rounding) -> Value {
        let render = |v: &[T]| v.iter().map(|x| x.render(places, rounding)).collect::<Vec<_>>();
        Value::Array(
            self.snapshots
                .iter()
                .zip(&self.kinds)
                .enumerate()
                .map(|(i, (m, kind))| {
                    json!({
                        "index": i + 1,
                        "kind": kind.as_str(),
                        "entries": m.render(places, rounding),
                        "row_sums": render(&m.row_sums()),
                        "col_sums": render(&m.col_sums()),
                    })
                })
                .collect(),
        )
    }
}

/// Exactly `steps` elementary scalings, row first. Exact in rational mode.
pub fn sinkhorn_iterate<T: Scalar>(a: &Matrix<T>, steps: usize) -> Result<IterationTrace<T>> {
    a.ensure_positive()?;
    let mut x = DiagonalScaling::ones(a.rows());
    let mut y = DiagonalScaling::ones(a.cols());
    let mut current = a.clone();
    let mut trace = IterationTrace {
        original: a.clone(),
        snapshots: Vec::with_capacity(steps),
        kinds: Vec::with_capacity(steps),
        accumulated: Vec::with_capacity(steps),
    };
    for step in 0..steps {
        let kind = if step % 2 == 0 { StepKind::Row } else { StepKind::Column };
        let (d, next) = match kind {
            StepKind::Row => current.row_scale()?,
            StepKind::Column => current.col_scale()?,
        };
        match kind {
            StepKind::Row => x = d.compose(&x)?,
            StepKind::Column => y = y.compose(&d)?,
        }
        current = next;
        trace.snapshots.push(current.clone());
        trace.kinds.push(kind);
        trace.accumulated.push((x.clone(), y.clone()));
    }
    Ok(trace)
}

/// Stopping rule for [`sinkhorn_limit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinkhornOptions {
    /// Converged once the residual after a full pair is at most this.
    pub tol: f64,
    pub max_pairs: usize,
}

impl Default for SinkhornOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_pairs: 1000 }
    }
}

#[derive(Debug, Clone)]
pub struct SinkhornResult {
    pub limit: Matrix<f64>,
    pub x: DiagonalScaling<f64>,
    pub y: DiagonalScaling<f64>,
    /// Elementary scalings performed.
    pub steps_taken: usize,
    pub pairs: usize,
    pub converged: bool,
    /// Largest `|sum − 1|` over all rows and columns of `limit`.
    pub residual: f64,
    /// Residual after each pair.
    pub residual_history: Vec<f64>,
}

fn run_pairs(a: &Matrix<f64>, max_pairs: usize, tol: Option<f64>) -> Result<SinkhornResult> {
    a.ensure_square()?;
    a.ensure_positive()?;
    let mut x = DiagonalScaling::ones(a.rows());
    let mut y = DiagonalScaling::ones(a.cols());
    let mut current = a.clone();
    let mut history = Vec::new();
    let mut residual = current.stochastic_residual();
    let mut converged = tol.is_some_and(|t| residual <= t);
    let mut pairs = 0;
    while !converged && pairs < max_pairs {
        let (dx, r) = current.row_scale()?;
        let (dy, c) = r.col_scale()?;
        x = dx.compose(&x)?;
        y = y.compose(&dy)?;
        current = c;
        pairs += 1;
        residual = current.stochastic_residual();
        history.push(residual);
        converged = tol.is_some_and(|t| residual <= t);
    }
    Ok(SinkhornResult {
        limit: current,
        x,
        y,
        steps_taken: 2 * pairs,
        pairs,
        converged,
        residual,
        residual_history: history,
    })
}

/// Iterates row/column pairs until the residual drops to `opts.tol` or
/// `opts.max_pairs` pairs have run.
pub fn sinkhorn_limit(a: &Matrix<f64>, opts: &SinkhornOptions) -> Result<SinkhornResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    run_pairs(a, opts.max_pairs, Some(opts.tol))
}

/// Exactly `pairs` row/column pairs with no early exit. `converged` is
/// always false.
pub fn sinkhorn_pairs(a: &Matrix<f64>, pairs: usize) -> Result<SinkhornResult> {
    run_pairs(a, pairs, None)
}

/// The unique positive diagonal `X` with `X·A·X` doubly stochastic, for
/// symmetric `A`: `X_i = √(x_i·y_i)` from the general scaling.
pub fn symmetric_scaling(a: &Matrix<f64>, tol: f64) -> Result<DiagonalScaling<f64>> {
    a.ensure_square()?;
    let symmetric = (0..a.rows()).all(|i| (0..i).all(|j| a.get(i, j).approx_eq(a.get(j, i), 1e-12)));
    if !symmetric {
        return Err(Error::NotSymmetric);
    }
    let result = sinkhorn_limit(a, &SinkhornOptions { tol, ..SinkhornOptions::default() })?;
    let values = result.x.values().iter().zip(result.y.values()).map(|(x, y)| (x * y).sqrt()).collect();
    DiagonalScaling::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    fn f(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn a6_exact_iterates() {
        let a = q(&[&[2, 2, 1], &[2, 1, 1], &[1, 1, 1]]);
        let t = sinkhorn_iterate(&a, 3).unwrap();
        let s1 = t.snapshot(1).unwrap();
        assert_eq!((s1.get(0, 2), s1.get(1, 1), s1.get(2, 0)), (&rat(1, 5), &rat(1, 4), &rat(1, 3)));
        let s2 = t.snapshot(2).unwrap();
        assert_eq!((s2.get(0, 2), s2.get(1, 1), s2.get(2, 0)), (&rat(12, 47), &rat(15, 59), &rat(10, 37)));
        assert_eq!(*t.snapshot(3).unwrap().get(0, 2), rat(2183, 8434));
        assert_eq!(t.step_kinds(), &[StepKind::Row, StepKind::Column, StepKind::Row]);
    }

    #[test]
    fn snapshots_are_scalings_of_the_input() {
        let a = q(&[&[3, 1, 2], &[1, 4, 1], &[5, 9, 2]]);
        let t = sinkhorn_iterate(&a, 5).unwrap();
        for step in 1..=5 {
            let (x, y) = t.scalings_at(step).unwrap();
            assert_eq!(&a.scale_rows(x).scale_cols(y), t.snapshot(step).unwrap());
            let s = t.snapshot(step).unwrap();
            if step % 2 == 1 {
                assert!(s.row_sums().iter().all(|v| *v == int(1)));
            } else {
                assert!(s.col_sums().iter().all(|v| *v == int(1)));
            }
        }
        assert_eq!(t.accumulated_x(), t.scalings_at(5).unwrap().0);
    }

    #[test]
    fn doubly_stochastic_is_a_fixed_point() {
        let d = Matrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3), rat(1, 6)],
            vec![rat(1, 6), rat(1, 2), rat(1, 3)],
            vec![rat(1, 3), rat(1, 6), rat(1, 2)],
        ])
        .unwrap();
        let t = sinkhorn_iterate(&d, 4).unwrap();
        assert!(t.snapshots().iter().all(|s| *s == d));
    }

    #[test]
    fn twenty_pairs_reach_ten_digits() {
        let r = sinkhorn_pairs(&f(&[&[2., 1., 1.], &[1., 1., 1.], &[1., 1., 1.]]), 20).unwrap();
        assert!((r.limit.get(0, 0) - 0.4384471874).abs() < 1e-8);
        assert_eq!(r.steps_taken, 40);
        let r = sinkhorn_pairs(&f(&[&[2., 2., 1.], &[2., 1., 1.], &[1., 1., 2.]]), 20).unwrap();
        assert!((r.limit.get(2, 2) - 0.5172484223).abs() < 1e-8);
    }

    #[test]
    fn limit_reports_convergence() {
        let a = f(&[&[1., 1., 1.], &[1., 2., 2.], &[1., 2., 2.]]);
        let r = sinkhorn_limit(&a, &SinkhornOptions::default()).unwrap();
        assert!(r.converged && r.residual <= 1e-12);
        assert!(r.limit.max_abs_diff(&a.scale_rows(&r.x).scale_cols(&r.y)) < 1e-11);
        assert!((r.limit.get(0, 0) - 0.4384471873).abs() < 1e-8);
        let capped = sinkhorn_limit(&a, &SinkhornOptions { tol: 1e-15, max_pairs: 2 }).unwrap();
        assert!(!capped.converged);
        assert_eq!(capped.pairs, 2);
        assert!(matches!(sinkhorn_limit(&f(&[&[1., 2.]]), &SinkhornOptions::default()), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn symmetric_scalings() {
        let a1 = f(&[&[2., 1., 1.], &[1., 2., 1.], &[1., 1., 2.]]);
        let x = symmetric_scaling(&a1, 1e-13).unwrap();
        assert!(x.values().iter().all(|v| (v - 0.5).abs() < 1e-12));
        let a2 = f(&[&[3., 1., 1.], &[1., 1., 1.], &[1., 1., 1.]]);
        let x = symmetric_scaling(&a2, 1e-13).unwrap();
        let s6 = 6f64.sqrt();
        for (v, e) in x.values().iter().zip([s6 / 6., s6 / 4., s6 / 4.]) {
            assert!((v - e).abs() < 1e-10);
        }
        assert!(a2.scale_rows(&x).scale_cols(&x).is_doubly_stochastic(&1e-10));
        let u = Matrix::<f64>::uniform(3);
        assert!(symmetric_scaling(&u, 1e-12).unwrap().values().iter().all(|v| (v - 1.0).abs() < 1e-15));
        assert!(matches!(symmetric_scaling(&f(&[&[1., 2.], &[3., 1.]]), 1e-9), Err(Error::NotSymmetric)));
    }

    #[test]
    fn trace_json_shape() {
        let a = q(&[&[1, 2], &[3, 4]]);
        let j = sinkhorn_iterate(&a, 2).unwrap().to_json(10, Rounding::Nearest);
        assert_eq!(j[0]["index"], 1);
        assert_eq!(j[0]["kind"], "row");
        assert_eq!(j[0]["entries"][0][1], "2/3");
        assert_eq!(j[1]["col_sums"][1], "1");
    }
}
