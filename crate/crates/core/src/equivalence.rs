//! `A ~ B` when `B = λ·P·A·Q` for some `λ > 0` and permutation matrices
//! `P`, `Q`. Sinkhorn limits are invariant under `λ` and commute with the
//! permutations, so every positive symmetric two-valued 3×3 matrix inherits
//! its limit from one of the seven canonical families.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::families::FamilyTag;
use crate::matrix::{distinct_values, Matrix, Permutation, Scalar};
use crate::numerics::format_rational;

/// Relative tolerance for equality of float entries.
pub const FLOAT_REL_TOL: f64 = 1e-12;

/// The map `A ↦ λ·P·A·Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equivalence<T> {
    pub lambda: T,
    pub p: Permutation,
    pub q: Permutation,
}

impl<T: Scalar> Equivalence<T> {
    pub fn identity(n: usize) -> Self {
        Self { lambda: T::one(), p: Permutation::identity(n), q: Permutation::identity(n) }
    }

    pub fn apply(&self, a: &Matrix<T>) -> Result<Matrix<T>> {
        Ok(self.q.right_mul(&self.p.left_mul(a)?)?.scaled(&self.lambda))
    }

    /// `B ↦ λ⁻¹·P⁻¹·B·Q⁻¹`.
    pub fn inverse(&self) -> Self {
        Self { lambda: T::one() / self.lambda.clone(), p: self.p.inverse(), q: self.q.inverse() }
    }

    /// `self` followed by `next`: `A ↦ λ'λ·(P'P)·A·(QQ')`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        Ok(Self {
            lambda: next.lambda.clone() * self.lambda.clone(),
            p: next.p.compose(&self.p)?,
            q: self.q.compose(&next.q)?,
        })
    }
}

/// The class a two-valued matrix falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    /// Every entry equal.
    Uniform,
    Family(FamilyTag),
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Uniform => f.write_str("Uniform"),
            Class::Family(tag) => write!(f, "{tag}"),
        }
    }
}

/// `λ·P·A·Q` equals the canonical matrix of `family` with parameter `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceWitness<T> {
    pub lambda: T,
    pub p: Permutation,
    pub q: Permutation,
    pub family: Class,
    pub k: T,
}

impl<T: Scalar> EquivalenceWitness<T> {
    pub fn equivalence(&self) -> Equivalence<T> {
        Equivalence { lambda: self.lambda.clone(), p: self.p.clone(), q: self.q.clone() }
    }

    /// The canonical matrix `λ·P·A·Q` should equal.
    pub fn canonical(&self) -> Matrix<T> {
        match self.family {
            Class::Uniform => Matrix::from_fn(3, 3, |_, _| T::one()),
            Class::Family(tag) => canonical(tag, &self.k),
        }
    }

    pub fn to_json(&self) -> Value {
        let scalar = |v: &T| match v.to_rational() {
            Some(r) => Value::String(format_rational(&r)),
            None => json!(v.to_f64()),
        };
        json!({
            "lambda": scalar(&self.lambda),
            "P": self.p.one_based(),
            "Q": self.q.one_based(),
            "family": self.family.to_string(),
            "K": scalar(&self.k),
        })
    }
}

fn canonical<T: Scalar>(tag: FamilyTag, k: &T) -> Matrix<T> {
    let pattern = tag.k_pattern().expect("3x3 family");
    Matrix::from_fn(3, 3, |i, j| if pattern[i][j] { k.clone() } else { T::one() })
}

/// Finds `λ, P, Q` and a family with `λ·P·A·Q` canonical.
///
/// `λ` is the reciprocal of the value occurring at least five times and `K`
/// is the other value divided by it. Families are tried in order `A1`…`A7`,
/// and for each family `P` then `Q` in lexicographic order; the first match
/// is returned. Non-symmetric input is accepted when it matches; otherwise
/// it is reported as [`Error::NotSymmetric`].
pub fn classify_two_valued<T: Scalar>(a: &Matrix<T>) -> Result<EquivalenceWitness<T>> {
    if a.rows() != 3 || a.cols() != 3 {
        return Err(Error::DimensionMismatch(format!("classification needs a 3x3 matrix, got {}x{}", a.rows(), a.cols())));
    }
    a.ensure_positive()?;
    let values = distinct_values(a, FLOAT_REL_TOL);
    let identity = Permutation::identity(3);
    let (major, minor) = match values.as_slice() {
        [v] => {
            return Ok(EquivalenceWitness {
                lambda: T::one() / v.clone(),
                p: identity.clone(),
                q: identity,
                family: Class::Uniform,
                k: T::one(),
            })
        }
        [u, v] => {
            let count = a.entries().iter().filter(|e| e.approx_eq(u, FLOAT_REL_TOL)).count();
            if count >= 5 {
                (u.clone(), v.clone())
            } else {
                (v.clone(), u.clone())
            }
        }
        _ => return Err(Error::NotTwoValued),
    };
    let is_minor: Vec<bool> = a.entries().iter().map(|e| e.approx_eq(&minor, FLOAT_REL_TOL)).collect();
    let perms = Permutation::all(3);
    for tag in FamilyTag::CLASSES {
        let pattern = tag.k_pattern().expect("3x3 family");
        for p in &perms {
            for q in &perms {
                // (P·A·Q)[i][j] = A[p(i)][q⁻¹(j)]
                let q_inv = q.inverse();
                let matches = (0..3).all(|i| (0..3).all(|j| is_minor[3 * p.apply(i) + q_inv.apply(j)] == pattern[i][j]));
                if matches {
                    return Ok(EquivalenceWitness {
                        lambda: T::one() / major.clone(),
                        p: p.clone(),
                        q: q.clone(),
                        family: Class::Family(tag),
                        k: minor / major,
                    });
                }
            }
        }
    }
    if a.is_symmetric() {
        Err(Error::NoClass)
    } else {
        Err(Error::NotSymmetric)
    }
}

/// `P·S·Q`: carries `S(A)` to `S(λ·P·A·Q)`. The dilation drops out.
pub fn transport_limit<T: Scalar, U: Scalar>(s: &Matrix<T>, w: &EquivalenceWitness<U>) -> Result<Matrix<T>> {
    transport_by(s, &w.equivalence())
}

/// As [`transport_limit`] for an arbitrary equivalence.
pub fn transport_by<T: Scalar, U>(s: &Matrix<T>, e: &Equivalence<U>) -> Result<Matrix<T>> {
    s.ensure_square()?;
    if !s.is_doubly_stochastic(&T::default_tolerance(s.rows())) {
        return Err(Error::NotDoublyStochastic);
    }
    e.q.right_mul(&e.p.left_mul(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{FamilySpec, DEFAULT_PRECISION};
    use crate::numerics::rational::{int, rat};
    use num_rational::BigRational;
    use crate::scaling::{sinkhorn_limit, SinkhornOptions};

    fn q(rows: [[i64; 3]; 3]) -> Matrix<BigRational> {
        Matrix::from_fn(3, 3, |i, j| int(rows[i][j]))
    }

    #[test]
    fn dilated_permuted_example() {
        let a = q([[2, 2, 2], [3, 2, 2], [2, 2, 3]]);
        let w = classify_two_valued(&a).unwrap();
        assert_eq!(w.lambda, rat(1, 2));
        assert_eq!(w.k, rat(3, 2));
        assert_eq!(w.family, Class::Family(FamilyTag::A5));
        assert_eq!(w.equivalence().apply(&a).unwrap(), w.canonical());
        let json = w.to_json();
        assert_eq!(json["K"], "3/2");
        assert_eq!(json["lambda"], "1/2");
    }

    #[test]
    fn canonical_inputs_classify_trivially() {
        let w = classify_two_valued(&q([[5, 1, 1], [1, 5, 1], [1, 1, 5]])).unwrap();
        assert_eq!(w.family, Class::Family(FamilyTag::A1));
        assert_eq!(w.lambda, int(1));
        assert!(w.p.is_identity() && w.q.is_identity());
        let w = classify_two_valued(&q([[1, 1, 1], [1, 2, 2], [1, 2, 2]])).unwrap();
        assert_eq!((w.family, w.k), (Class::Family(FamilyTag::A3), int(2)));
        let w = classify_two_valued(&q([[4, 4, 4], [4, 4, 4], [4, 4, 4]])).unwrap();
        assert_eq!((w.family, w.k, w.lambda), (Class::Uniform, int(1), rat(1, 4)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(classify_two_valued(&q([[1, 2, 3], [2, 1, 1], [3, 1, 1]])), Err(Error::NotTwoValued)));
        assert!(matches!(classify_two_valued(&q([[1, 0, 1], [0, 1, 1], [1, 1, 1]])), Err(Error::NonPositive { .. })));
        // five 2s in a pattern no permutation pair makes canonical
        assert!(matches!(classify_two_valued(&q([[2, 2, 2], [2, 2, 1], [1, 1, 1]])), Err(Error::NotSymmetric)));
    }

    #[test]
    fn every_symmetric_pattern_classifies() {
        let positions = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];
        for k in [rat(1, 3), int(2), rat(7, 5)] {
            for mask in 0..64u32 {
                let mut m = [[int(1), int(1), int(1)], [int(1), int(1), int(1)], [int(1), int(1), int(1)]];
                for (bit, &(i, j)) in positions.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        m[i][j] = k.clone();
                        m[j][i] = k.clone();
                    }
                }
                let a = Matrix::from_fn(3, 3, |i, j| m[i][j].clone());
                let w = classify_two_valued(&a).unwrap();
                assert_eq!(w.equivalence().apply(&a).unwrap(), w.canonical(), "mask {mask}");
                assert_eq!(w.equivalence().inverse().apply(&w.canonical()).unwrap(), a);
            }
        }
    }

    #[test]
    fn float_classification_uses_relative_tolerance() {
        let a = Matrix::from_rows(vec![vec![2.0, 1.0, 1.0], vec![1.0, 1.0 + 1e-15, 1.0], vec![1.0, 1.0, 1.0]]).unwrap();
        let w = classify_two_valued(&a).unwrap();
        assert_eq!(w.family, Class::Family(FamilyTag::A2));
        assert_eq!(w.k, 2.0);
    }

    #[test]
    fn equivalence_group_laws() {
        let a = q([[3, 1, 4], [1, 5, 9], [2, 6, 5]]);
        let e = Equivalence {
            lambda: rat(2, 3),
            p: Permutation::from_cycle(3, &[1, 2, 3]).unwrap(),
            q: Permutation::from_cycle(3, &[1, 3]).unwrap(),
        };
        let f = Equivalence { lambda: int(5), p: Permutation::from_cycle(3, &[2, 3]).unwrap(), q: Permutation::identity(3) };
        let b = e.apply(&a).unwrap();
        assert_eq!(e.inverse().apply(&b).unwrap(), a);
        assert_eq!(e.then(&f).unwrap().apply(&a).unwrap(), f.apply(&b).unwrap());
        assert_eq!(Equivalence::identity(3).apply(&a).unwrap(), a);
    }

    #[test]
    fn transport_matches_iteration() {
        let opts = SinkhornOptions::default();
        for tag in FamilyTag::CLASSES {
            let spec = FamilySpec::family(tag, int(2)).unwrap();
            let closed = spec.limit(DEFAULT_PRECISION).unwrap().matrix;
            let shuffle = Equivalence {
                lambda: rat(3, 7),
                p: Permutation::from_cycle(3, &[1, 3, 2]).unwrap(),
                q: Permutation::from_cycle(3, &[1, 2]).unwrap(),
            };
            let input = shuffle.apply(&spec.matrix()).unwrap();
            let w = classify_two_valued(&input).unwrap();
            assert_eq!(w.family, Class::Family(tag));
            let iterated = sinkhorn_limit(&input.to_f64(), &opts).unwrap().limit;
            assert!(transport_by(&closed, &w.equivalence().inverse()).unwrap().max_abs_diff(&iterated) < 1e-9, "{tag}");
            assert!(transport_limit(&iterated, &w).unwrap().max_abs_diff(&closed) < 1e-9, "{tag}");
        }
    }

    #[test]
    fn transport_rejects_non_stochastic() {
        let w = classify_two_valued(&q([[2, 1, 1], [1, 1, 1], [1, 1, 1]])).unwrap();
        assert!(matches!(transport_limit(&q([[2, 1, 1], [1, 1, 1], [1, 1, 1]]), &w), Err(Error::NotDoublyStochastic)));
        let uniform: Matrix<BigRational> = Matrix::uniform(3);
        assert_eq!(transport_limit(&uniform, &w).unwrap(), uniform);
    }
}
