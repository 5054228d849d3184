//! Quadratic surds `p + q·√D` with rational `p`, `q` and square-free `D`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{RationalInterval, RootEnclosure};
use super::rational::{format_rational, pow10};
use crate::error::{Error, Result};

/// Trial division bound for square-free extraction. Any cofactor left after
/// dividing out primes below this bound is checked for being a perfect square.
const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

/// Splits `n > 0` as `f² · s` and returns `(f, s)`.
///
/// Exact whenever the cofactor left after trial division is prime, a perfect
/// square, or a product of two distinct primes, which covers every radicand
/// below 2^60.
pub fn square_free_decomposition(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "square-free decomposition of a non-positive integer");
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            square *= num_traits::pow(bp.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                free *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            square *= r;
        } else {
            free *= rest;
        }
    }
    (square, free)
}

/// `p + q·√d` in canonical form: `d` square-free, and `d = 0, q = 0` for
/// rationals.
///
/// Canonical form makes equality structural. Arithmetic between surds with
/// different radicands panics unless one side is rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: BigRational,
    q: BigRational,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn new(p: BigRational, q: BigRational, d: BigInt) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        if d.is_zero() || q.is_zero() {
            return Ok(Self::from_rational(p));
        }
        let (f, s) = square_free_decomposition(&d);
        let q = q * BigRational::from_integer(f);
        if s.is_one() {
            return Ok(Self::from_rational(p + q));
        }
        Ok(Self { p, q, d: s })
    }

    pub fn from_rational(p: BigRational) -> Self {
        Self { p, q: BigRational::zero(), d: BigInt::zero() }
    }

    /// The non-negative square root of a non-negative rational.
    pub fn sqrt_of(r: &BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        // √(u/v) = √(u·v) / v
        let q = BigRational::new(BigInt::one(), r.denom().clone());
        Self::new(BigRational::zero(), q, r.numer() * r.denom())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.p
    }

    pub fn surd_coefficient(&self) -> &BigRational {
        &self.q
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.p.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self { p: self.p.clone(), q: -&self.q, d: self.d.clone() }
    }

    /// Field norm `p² − q²·d`.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - &self.q * &self.q * BigRational::from_integer(self.d.clone())
    }

    /// Exact sign of the value.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&BigRational::zero());
        let sq = self.q.cmp(&BigRational::zero());
        if sq == Ordering::Equal || sp == sq {
            return if sp == Ordering::Equal { sq } else { sp };
        }
        if sp == Ordering::Equal {
            return sq;
        }
        // opposite signs: the larger magnitude wins
        let p2 = &self.p * &self.p;
        let q2d = &self.q * &self.q * BigRational::from_integer(self.d.clone());
        match p2.cmp(&q2d) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    fn field(&self, other: &Self) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "surd arithmetic across different radicands");
                self.d.clone()
            }
        }
    }

    pub fn same_field(&self, other: &Self) -> bool {
        self.is_rational() || other.is_rational() || self.d == other.d
    }

    fn build(p: BigRational, q: BigRational, d: BigInt) -> Self {
        if q.is_zero() || d.is_zero() {
            Self::from_rational(p)
        } else {
            Self { p, q, d }
        }
    }

    /// Rational enclosure whose width is strictly below `width`.
    pub fn enclose(&self, width: &BigRational) -> RationalInterval {
        if self.is_rational() {
            return RationalInterval::point(self.p.clone());
        }
        let mut root = RootEnclosure::square_root(BigRational::from_integer(self.d.clone()))
            .expect("canonical radicand is positive");
        root.refine_to(&(width / self.q.abs()));
        root.interval().scale(&self.q).shift(&self.p)
    }

    /// A rational within `10^(-precision)` of the exact value.
    pub fn eval(&self, precision: u32) -> BigRational {
        let width = BigRational::new(BigInt::one(), pow10(precision));
        self.enclose(&width).midpoint()
    }

    pub fn to_f64(&self) -> f64 {
        super::rational::to_f64(&self.eval(20))
    }
}

impl From<BigRational> for QuadraticSurd {
    fn from(p: BigRational) -> Self {
        Self::from_rational(p)
    }
}

impl Add<&QuadraticSurd> for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        let d = self.field(rhs);
        QuadraticSurd::build(&self.p + &rhs.p, &self.q + &rhs.q, d)
    }
}

impl Sub<&QuadraticSurd> for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        let d = self.field(rhs);
        QuadraticSurd::build(&self.p - &rhs.p, &self.q - &rhs.q, d)
    }
}

impl Mul<&QuadraticSurd> for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        let d = self.field(rhs);
        let dr = BigRational::from_integer(d.clone());
        let p = &self.p * &rhs.p + &self.q * &rhs.q * dr;
        let q = &self.p * &rhs.q + &self.q * &rhs.p;
        QuadraticSurd::build(p, q, d)
    }
}

impl Div<&QuadraticSurd> for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn div(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        let norm = rhs.norm();
        assert!(!norm.is_zero(), "division by zero surd");
        let num = self * &rhs.conjugate();
        QuadraticSurd::build(num.p / &norm, num.q / &norm, num.d)
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd { p: -&self.p, q: -&self.q, d: self.d.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, rhs: QuadraticSurd) -> QuadraticSurd {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BigRational> for &QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, rhs: &BigRational) -> QuadraticSurd {
                self.$m(&QuadraticSurd::from_rational(rhs.clone()))
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        -&self
    }
}

/// Rationals print as `p/q`; irrational surds as `(P + Q*sqrt(D))/R` with
/// integers `P`, `Q`, `R > 0` over the least common denominator.
impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&format_rational(&self.p));
        }
        let r = self.p.denom().lcm(self.q.denom());
        let rr = BigRational::from_integer(r.clone());
        let big_p = (&self.p * &rr).to_integer();
        let big_q = (&self.q * &rr).to_integer();
        let sign = if big_q.is_negative() { '-' } else { '+' };
        write!(f, "({} {} {}*sqrt({}))/{}", big_p, sign, big_q.abs(), self.d, r)
    }
}

impl FromStr for QuadraticSurd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Malformed(format!("not a quadratic surd: {s:?}"));
        let Some(body) = s.strip_prefix('(') else {
            return super::rational::parse_rational(s).map(Self::from_rational);
        };
        let (inner, denom) = body.rsplit_once(")/").ok_or_else(bad)?;
        let denom = BigInt::from_str(denom.trim()).map_err(|_| bad())?;
        let (p, rest, negative) = if let Some((p, rest)) = inner.split_once(" + ") {
            (p, rest, false)
        } else if let Some((p, rest)) = inner.split_once(" - ") {
            (p, rest, true)
        } else {
            return Err(bad());
        };
        let (q, radicand) = rest.split_once("*sqrt(").ok_or_else(bad)?;
        let radicand = radicand.strip_suffix(')').ok_or_else(bad)?;
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let mut q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if negative {
            q = -q;
        }
        let d = BigInt::from_str(radicand.trim()).map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        Self::new(BigRational::new(p, denom.clone()), BigRational::new(q, denom), d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    fn surd(p: BigRational, q: BigRational, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(p, q, BigInt::from(d)).unwrap()
    }

    #[test]
    fn square_free_parts() {
        let check = |n: i64, f: i64, s: i64| {
            assert_eq!(square_free_decomposition(&BigInt::from(n)), (BigInt::from(f), BigInt::from(s)));
        };
        check(1, 1, 1);
        check(12, 2, 3);
        check(17, 1, 17);
        check(72, 6, 2);
        check(1_000_003 * 1_000_003, 1_000_003, 1);
        check(4 * 1_000_003, 2, 1_000_003);
    }

    #[test]
    fn eval_a2_entry() {
        // (5 - √17)/2
        let a = surd(rat(5, 2), rat(-1, 2), 17);
        let v = a.eval(10);
        // the printed value 0.4384471870 is itself off by ~2e-10
        let expected = rat(4_384_471_870, 10_000_000_000);
        assert!((&v - expected).abs() < rat(1, 1_000_000_000));
        assert_eq!(crate::numerics::to_decimal(&v, 10, crate::numerics::Rounding::Nearest), "0.4384471872");
    }

    #[test]
    fn eval_zero_and_perfect_square() {
        assert_eq!(surd(int(0), int(0), 0).eval(5), int(0));
        let three = surd(int(1), int(2), 1);
        assert!(three.is_rational());
        assert_eq!(three.eval(30), int(3));
        let canon = surd(int(1), int(1), 4);
        assert_eq!(canon, QuadraticSurd::from_rational(int(3)));
    }

    #[test]
    fn canonical_radicand() {
        let a = surd(int(0), int(1), 12);
        assert_eq!(a.radicand(), &BigInt::from(3));
        assert_eq!(a.surd_coefficient(), &int(2));
        assert_eq!(QuadraticSurd::sqrt_of(&rat(3, 4)).unwrap(), surd(int(0), rat(1, 2), 3));
    }

    #[test]
    fn arithmetic_and_sign() {
        let s = QuadraticSurd::sqrt_of(&int(2)).unwrap();
        assert_eq!(&s * &s, QuadraticSurd::from_rational(int(2)));
        let x = surd(int(1), int(1), 2);
        let inv = &QuadraticSurd::from_rational(int(1)) / &x;
        assert_eq!(inv, surd(int(-1), int(1), 2));
        assert_eq!((&x * &inv), QuadraticSurd::from_rational(int(1)));
        assert!(surd(int(-37), int(5), 73).is_positive());
        assert_eq!(surd(int(3), int(-1), 10).signum(), Ordering::Less);
        assert_eq!(surd(int(3), int(-1), 8).signum(), Ordering::Greater);
        assert!(!(&x - &x).is_positive());
    }

    #[test]
    #[should_panic(expected = "different radicands")]
    fn mixed_fields_panic() {
        let _ = &QuadraticSurd::sqrt_of(&int(2)).unwrap() + &QuadraticSurd::sqrt_of(&int(3)).unwrap();
    }

    #[test]
    fn text_form() {
        let a = surd(rat(-37, 38), rat(5, 38), 73);
        assert_eq!(a.to_string(), "(-37 + 5*sqrt(73))/38");
        assert_eq!(surd(rat(5, 2), rat(-1, 2), 17).to_string(), "(5 - 1*sqrt(17))/2");
        assert_eq!(surd(int(1), int(1), 3).to_string(), "(1 + 1*sqrt(3))/1");
        assert_eq!(QuadraticSurd::from_rational(rat(3, 8)).to_string(), "3/8");
        assert_eq!("(-37 + 5*sqrt(73))/38".parse::<QuadraticSurd>().unwrap(), a);
        assert_eq!("3/8".parse::<QuadraticSurd>().unwrap().to_rational(), Some(rat(3, 8)));
        assert!("(1 ~ 2*sqrt(3))/1".parse::<QuadraticSurd>().is_err());
    }
}
