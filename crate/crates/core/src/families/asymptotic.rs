use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{FamilySpec, FamilyTag, MbnParams};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Which end of the parameter range: `K` for `A1`–`A7`, `MN/B²` for `MBN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToInfinity,
    ToZero,
}

fn q(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn block(k: usize, l: usize, a: BigRational, b: BigRational, c: BigRational) -> Matrix<BigRational> {
    Matrix::from_fn(k + l, k + l, |i, j| match (i < k, j < k) {
        (true, true) => a.clone(),
        (false, false) => c.clone(),
        _ => b.clone(),
    })
}

fn mbn_asymptote(p: &MbnParams, ratio: Direction) -> Matrix<BigRational> {
    let (k, l) = (q(p.k), q(p.l));
    let zero = BigRational::zero;
    match ratio {
        Direction::ToInfinity => block(p.k, p.l, k.recip(), zero(), l.recip()),
        Direction::ToZero if p.k <= p.l => block(p.k, p.l, zero(), l.recip(), (&l - &k) / (&l * &l)),
        Direction::ToZero => block(p.k, p.l, (&k - &l) / (&k * &k), k.recip(), zero()),
    }
}

fn from_rows(rows: [[usize; 3]; 3]) -> Matrix<BigRational> {
    Matrix::from_fn(3, 3, |i, j| q(rows[i][j]))
}

/// Limit of `S(A)` as the parameter tends to `0` or `∞`, for the families
/// where it is rational.
pub fn asymptotic_limit(spec: &FamilySpec, direction: Direction) -> Result<Matrix<BigRational>> {
    let half = || BigRational::new(1.into(), 2.into());
    Ok(match (spec.tag, direction) {
        (FamilyTag::A1, Direction::ToInfinity) => Matrix::identity(3),
        (FamilyTag::A1, Direction::ToZero) => {
            Matrix::from_fn(3, 3, |i, j| if i == j { BigRational::zero() } else { half() })
        }
        (FamilyTag::A2 | FamilyTag::A3 | FamilyTag::Mbn, d) => {
            mbn_asymptote(&spec.as_mbn().expect("block family"), d)
        }
        // MN/B² = 1/K² runs the other way
        (FamilyTag::A4, d) => {
            let flipped = match d {
                Direction::ToInfinity => Direction::ToZero,
                Direction::ToZero => Direction::ToInfinity,
            };
            mbn_asymptote(&spec.as_mbn().expect("block family"), flipped)
        }
        (FamilyTag::A5, Direction::ToInfinity) => Matrix::identity(3),
        (FamilyTag::A6, Direction::ToInfinity) => from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
        (FamilyTag::A6, Direction::ToZero) => from_rows([[0, 0, 1], [0, 1, 0], [1, 0, 0]]),
        (tag, d) => {
            return Err(Error::Unsupported(format!("no rational asymptote for {tag} in direction {d:?}")));
        }
    })
}

/// Whether `S(A2)` is rational, and if so the rational scaling.
#[derive(Debug, Clone, PartialEq)]
pub enum A2Rationality {
    /// `K = r(r+1)/2`: the limit is rational and `S = X'·A2·Y'` with
    /// rational diagonals.
    Triangular {
        r: BigInt,
        limit: Matrix<BigRational>,
        /// `x²` with `X = diag(x, y, y)`.
        x_squared: BigRational,
        x_prime: Vec<BigRational>,
        y_prime: Vec<BigRational>,
    },
    NotTriangular,
}

/// `S(A2)` is rational exactly when `K` is a triangular number
/// `r(r+1)/2`, i.e. `8K + 1` is an odd square.
pub fn a2_rationality(k: &BigRational) -> Result<A2Rationality> {
    if !k.is_positive() {
        return Err(Error::InvalidParameter("K must be positive".into()));
    }
    if !k.is_integer() {
        return Ok(A2Rationality::NotTriangular);
    }
    let disc: BigInt = k.to_integer() * 8 + 1;
    let s = disc.sqrt();
    if &s * &s != disc {
        return Ok(A2Rationality::NotTriangular);
    }
    let r: BigInt = (s - 1) / 2;
    let rq = BigRational::from_integer(r.clone());
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let r1 = &rq + &one;
    let r2 = &rq + &two;
    let a = &rq / &r2;
    let b = r2.recip();
    let c = &r1 / (&two * &r2);
    let limit = block(1, 2, a, b.clone(), c);
    let x_squared = &two / (&r1 * &r2);
    // X' = diag(x², xy, xy), Y' = diag(1, y/x, y/x) with y/x = (r+1)/2
    let ratio = &r1 / &two;
    Ok(A2Rationality::Triangular {
        r,
        limit,
        x_prime: vec![x_squared.clone(), b.clone(), b],
        y_prime: vec![one, ratio.clone(), ratio],
        x_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{limit_mbn, DEFAULT_PRECISION};
    use crate::matrix::DiagonalScaling;
    use crate::numerics::rational::{int, rat};

    #[test]
    fn a2_triangular_values() {
        let A2Rationality::Triangular { r, limit, x_squared, x_prime, y_prime } = a2_rationality(&int(3)).unwrap() else {
            panic!("3 is triangular")
        };
        assert_eq!(r, BigInt::from(2));
        assert_eq!(x_squared, rat(1, 6));
        assert_eq!(x_prime, vec![rat(1, 6), rat(1, 4), rat(1, 4)]);
        assert_eq!(y_prime, vec![int(1), rat(3, 2), rat(3, 2)]);
        let a2 = FamilySpec::family(FamilyTag::A2, int(3)).unwrap().matrix();
        let scaled = a2
            .scale_rows(&DiagonalScaling::new(x_prime).unwrap())
            .scale_cols(&DiagonalScaling::new(y_prime).unwrap());
        assert_eq!(scaled, limit);
        assert!(scaled.is_doubly_stochastic(&BigRational::zero()));
    }

    #[test]
    fn a2_rational_exactly_for_triangular_k() {
        for n in 1..60i64 {
            let k = int(n);
            let spec = FamilySpec::family(FamilyTag::A2, k.clone()).unwrap();
            let rational = n == 1 || spec.limit(10).unwrap().entries.iter().all(|e| e.exact.as_ref().unwrap().to_rational().is_some());
            let triangular = matches!(a2_rationality(&k).unwrap(), A2Rationality::Triangular { .. });
            assert_eq!(rational, triangular, "K = {n}");
        }
        assert_eq!(a2_rationality(&rat(3, 2)).unwrap(), A2Rationality::NotTriangular);
    }

    #[test]
    fn mbn_limits_approach_asymptotes() {
        for (k, l) in [(1, 2), (2, 1), (2, 2), (3, 1)] {
            for (m, d) in [(int(1_000_000_000), Direction::ToInfinity), (rat(1, 1_000_000_000), Direction::ToZero)] {
                let p = MbnParams::new(k, l, m, int(1), int(1)).unwrap();
                let lim = limit_mbn(&p, DEFAULT_PRECISION).unwrap();
                let target = mbn_asymptote(&p, d).to_f64();
                assert!(lim.matrix.max_abs_diff(&target) < 1e-4, "k={k} l={l} {d:?}");
                assert!(mbn_asymptote(&p, d).is_doubly_stochastic(&BigRational::zero()));
            }
        }
    }

    #[test]
    fn family_asymptotes() {
        let cases = [
            (FamilyTag::A1, Direction::ToZero, rat(1, 1_000_000)),
            (FamilyTag::A1, Direction::ToInfinity, int(1_000_000)),
            (FamilyTag::A2, Direction::ToInfinity, int(1_000_000_000_000)),
            (FamilyTag::A3, Direction::ToZero, rat(1, 1_000_000)),
            (FamilyTag::A4, Direction::ToInfinity, int(1_000_000)),
            (FamilyTag::A4, Direction::ToZero, rat(1, 1_000_000)),
            (FamilyTag::A5, Direction::ToInfinity, int(1_000_000_000)),
            (FamilyTag::A6, Direction::ToInfinity, int(1_000_000_000_000_000)),
            (FamilyTag::A6, Direction::ToZero, rat(1, 1_000_000_000_000_000)),
        ];
        for (tag, d, k) in cases {
            let spec = FamilySpec::family(tag, k).unwrap();
            let target = asymptotic_limit(&spec, d).unwrap();
            let lim = spec.limit(DEFAULT_PRECISION).unwrap();
            assert!(lim.matrix.max_abs_diff(&target.to_f64()) < 1e-3, "{tag} {d:?}");
        }
        let a4 = asymptotic_limit(&FamilySpec::family(FamilyTag::A4, int(2)).unwrap(), Direction::ToInfinity).unwrap();
        assert_eq!(a4.row(1), &[rat(1, 2), rat(1, 4), rat(1, 4)]);
        let a7 = FamilySpec::family(FamilyTag::A7, int(2)).unwrap();
        assert!(matches!(asymptotic_limit(&a7, Direction::ToInfinity), Err(Error::Unsupported(_))));
    }
}
