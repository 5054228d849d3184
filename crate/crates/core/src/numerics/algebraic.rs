use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::cubic::CubicFieldElement;
use super::interval::{sqrt_bounds, RationalInterval};
use super::rational::{format_rational, pow10, to_f64};
use super::surd::QuadraticSurd;

/// Exact value of a closed-form Sinkhorn limit entry or scaling coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraicScalar {
    Rational(BigRational),
    Surd(QuadraticSurd),
    Cubic(CubicFieldElement),
    /// Non-negative square root of a non-negative field element.
    Sqrt(Box<AlgebraicScalar>),
}

impl AlgebraicScalar {
    pub fn sqrt(inner: AlgebraicScalar) -> Self {
        AlgebraicScalar::Sqrt(Box::new(inner))
    }

    /// Enclosure of width strictly below `width`.
    pub fn enclose(&self, width: &BigRational) -> RationalInterval {
        match self {
            AlgebraicScalar::Rational(r) => RationalInterval::point(r.clone()),
            AlgebraicScalar::Surd(s) => s.enclose(width),
            AlgebraicScalar::Cubic(c) => c.enclose(width),
            AlgebraicScalar::Sqrt(inner) => {
                // |√a − √b| ≤ √|a − b|, so an inner width of (w/2)² suffices
                let half = width / BigRational::from_integer(BigInt::from(2));
                let quarter = &half / BigRational::from_integer(BigInt::from(2));
                let iv = inner.enclose(&(&half * &half));
                let lo = sqrt_bounds(iv.lo(), &quarter);
                let hi = sqrt_bounds(iv.hi(), &quarter);
                RationalInterval::new(lo.lo().clone(), hi.hi().clone()).expect("monotone square root")
            }
        }
    }

    /// A rational within `10^(-precision)` of the exact value.
    pub fn eval(&self, precision: u32) -> BigRational {
        let width = BigRational::new(BigInt::one(), pow10(precision));
        self.enclose(&width).midpoint()
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.eval(20))
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            AlgebraicScalar::Rational(r) => Some(r.clone()),
            AlgebraicScalar::Surd(s) => s.to_rational(),
            AlgebraicScalar::Cubic(c) => c.to_rational(),
            AlgebraicScalar::Sqrt(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            AlgebraicScalar::Rational(r) => r.is_positive(),
            AlgebraicScalar::Surd(s) => s.is_positive(),
            AlgebraicScalar::Cubic(c) => c.is_positive(),
            AlgebraicScalar::Sqrt(inner) => inner.is_positive(),
        }
    }

    /// Exact sum when both values live in one field (ℚ, a common ℚ(√D), or a
    /// common ℚ(K^(1/3))); `None` otherwise.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        use AlgebraicScalar::*;
        Some(match (self, other) {
            (Rational(a), Rational(b)) => Rational(a + b),
            (Surd(a), Surd(b)) if a.same_field(b) => Surd(a + b),
            (Rational(a), Surd(b)) | (Surd(b), Rational(a)) => Surd(b + a),
            (Cubic(a), Cubic(b)) if a.k() == b.k() => Cubic(a + b),
            (Rational(a), Cubic(b)) | (Cubic(b), Rational(a)) => {
                Cubic(b + &CubicFieldElement::from_rational(a.clone(), b.k().clone()).ok()?)
            }
            _ => return None,
        })
    }

    /// Exact equality to a rational, when decidable in the value's field.
    pub fn equals_rational(&self, r: &BigRational) -> Option<bool> {
        match self {
            AlgebraicScalar::Sqrt(_) => None,
            other => Some(other.to_rational().as_ref() == Some(r)),
        }
    }
}

impl From<BigRational> for AlgebraicScalar {
    fn from(r: BigRational) -> Self {
        AlgebraicScalar::Rational(r)
    }
}

impl From<QuadraticSurd> for AlgebraicScalar {
    fn from(s: QuadraticSurd) -> Self {
        match s.to_rational() {
            Some(r) => AlgebraicScalar::Rational(r),
            None => AlgebraicScalar::Surd(s),
        }
    }
}

impl From<CubicFieldElement> for AlgebraicScalar {
    fn from(c: CubicFieldElement) -> Self {
        AlgebraicScalar::Cubic(c)
    }
}

impl fmt::Display for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicScalar::Rational(r) => f.write_str(&format_rational(r)),
            AlgebraicScalar::Surd(s) => write!(f, "{s}"),
            AlgebraicScalar::Cubic(c) => write!(f, "{c}"),
            AlgebraicScalar::Sqrt(inner) => write!(f, "sqrt({inner})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    #[test]
    fn sqrt_enclosure_is_certified() {
        let x = AlgebraicScalar::sqrt(AlgebraicScalar::Rational(int(2)));
        let w = rat(1, 1_000_000_000_000);
        let iv = x.enclose(&w);
        assert!(iv.width() < w);
        assert!(iv.lo() * iv.lo() <= int(2) && iv.hi() * iv.hi() >= int(2));
        assert_eq!(x.to_string(), "sqrt(2)");
    }

    #[test]
    fn nested_sqrt_of_surd() {
        // √((5 - √13)/6 · (4 - √13)) = (√13 - 3)/2
        let b = QuadraticSurd::new(rat(5, 6), rat(-1, 6), BigInt::from(13)).unwrap();
        let d = QuadraticSurd::new(int(4), int(-1), BigInt::from(13)).unwrap();
        let c = AlgebraicScalar::sqrt(AlgebraicScalar::Surd(&b * &d));
        let expected = (13f64.sqrt() - 3.0) / 2.0;
        assert!((c.to_f64() - expected).abs() < 1e-15);
        assert!(c.is_positive());
    }

    #[test]
    fn field_sums() {
        let s = AlgebraicScalar::from(QuadraticSurd::sqrt_of(&int(3)).unwrap());
        let r = AlgebraicScalar::Rational(rat(1, 2));
        assert!(matches!(s.checked_add(&r), Some(AlgebraicScalar::Surd(_))));
        let s2 = AlgebraicScalar::from(QuadraticSurd::sqrt_of(&int(2)).unwrap());
        assert!(s.checked_add(&s2).is_none());
        let t = AlgebraicScalar::Cubic(CubicFieldElement::generator(int(2)).unwrap());
        assert!(t.checked_add(&r).is_some());
        assert!(t.checked_add(&s).is_none());
        assert_eq!(r.equals_rational(&rat(1, 2)), Some(true));
        assert_eq!(AlgebraicScalar::sqrt(r.clone()).equals_rational(&rat(1, 2)), None);
    }
}
