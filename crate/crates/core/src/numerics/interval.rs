use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::format_rational;
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidParameter(format!(
                "interval endpoints out of order: [{}, {}]",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Whether zero lies outside the interval.
    pub fn excludes_zero(&self) -> bool {
        self.lo.is_positive() || self.hi.is_negative()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn shift(&self, c: &BigRational) -> Self {
        Self { lo: &self.lo + c, hi: &self.hi + c }
    }

    pub fn into_bounds(self) -> (BigRational, BigRational) {
        (self.lo, self.hi)
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

impl Add for &RationalInterval {
    type Output = RationalInterval;
    fn add(self, rhs: Self) -> RationalInterval {
        RationalInterval { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &RationalInterval {
    type Output = RationalInterval;
    fn sub(self, rhs: Self) -> RationalInterval {
        RationalInterval { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Neg for &RationalInterval {
    type Output = RationalInterval;
    fn neg(self) -> RationalInterval {
        RationalInterval { lo: -&self.hi, hi: -&self.lo }
    }
}

impl Mul for &RationalInterval {
    type Output = RationalInterval;
    fn mul(self, rhs: Self) -> RationalInterval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if *p < lo {
                lo = p.clone();
            }
            if *p > hi {
                hi = p.clone();
            }
        }
        RationalInterval { lo, hi }
    }
}

/// Bisection enclosure of the real root `radicand^(1/degree)`, radicand ≥ 0.
///
/// Starts from `[s, s + 1]` with `s = floor(floor(radicand)^(1/degree))`; each
/// [`refine`](Self::refine) halves the width, unless the midpoint is the
/// exact root, in which case the enclosure collapses to a point.
#[derive(Debug, Clone)]
pub struct RootEnclosure {
    radicand: BigRational,
    degree: u32,
    interval: RationalInterval,
}

impl RootEnclosure {
    pub fn new(radicand: BigRational, degree: u32) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        assert!(degree >= 1, "root degree must be positive");
        let s = BigRational::from_integer(radicand.floor().to_integer().nth_root(degree));
        let mut enc = Self {
            radicand,
            degree,
            interval: RationalInterval { lo: s.clone(), hi: s.clone() + BigRational::one() },
        };
        if enc.power(&s) == enc.radicand {
            enc.interval = RationalInterval::point(s);
        }
        Ok(enc)
    }

    pub fn square_root(radicand: BigRational) -> Result<Self> {
        Self::new(radicand, 2)
    }

    pub fn cube_root(radicand: BigRational) -> Result<Self> {
        Self::new(radicand, 3)
    }

    fn power(&self, x: &BigRational) -> BigRational {
        num_traits::pow(x.clone(), self.degree as usize)
    }

    pub fn interval(&self) -> &RationalInterval {
        &self.interval
    }

    pub fn is_exact(&self) -> bool {
        self.interval.is_point()
    }

    /// One bisection step.
    pub fn refine(&mut self) {
        if self.is_exact() {
            return;
        }
        let mid = self.interval.midpoint();
        let p = self.power(&mid);
        if p == self.radicand {
            self.interval = RationalInterval::point(mid);
        } else if p < self.radicand {
            self.interval.lo = mid;
        } else {
            self.interval.hi = mid;
        }
    }

    /// Narrows the enclosure until its width is strictly below `width`, in
    /// one step: with `2^-n < width`, `s = ⌊(radicand·2^(n·degree))^(1/degree)⌋`
    /// gives `s/2^n ≤ root < (s+1)/2^n`.
    pub fn refine_to(&mut self, width: &BigRational) -> &RationalInterval {
        if self.is_exact() || self.interval.width() < *width {
            return &self.interval;
        }
        let mut n = (width.recip().ceil().to_integer().bits() + 1) as usize;
        if n == 0 {
            n = 1;
        }
        let scale = BigInt::one() << n;
        let shifted = self.radicand.clone() * BigRational::from_integer(BigInt::one() << (n * self.degree as usize));
        let s = shifted.floor().to_integer().nth_root(self.degree);
        let lo = BigRational::new(s.clone(), scale.clone());
        let hi = BigRational::new(s + 1, scale);
        self.interval = if self.power(&lo) == self.radicand {
            RationalInterval::point(lo)
        } else if self.power(&hi) == self.radicand {
            RationalInterval::point(hi)
        } else {
            RationalInterval { lo, hi }
        };
        &self.interval
    }
}

/// Rational `[l, h]` with `l ≤ √x ≤ h` and `h − l < width`; requires x ≥ 0.
pub fn sqrt_bounds(x: &BigRational, width: &BigRational) -> RationalInterval {
    let x = if x.is_negative() { BigRational::zero() } else { x.clone() };
    let mut enc = RootEnclosure::square_root(x).expect("non-negative radicand");
    enc.refine_to(width).clone()
}
