//! Elements `c0 + c1·t + c2·t²` of ℚ(t) with `t³ = K`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{RationalInterval, RootEnclosure};
use super::rational::{exact_nth_root, format_rational, pow10};
use crate::error::{Error, Result};

/// Element of the cubic field generated by the real cube root `t` of `K > 0`.
///
/// When `K` is the cube of a rational the field degenerates to ℚ: the element
/// is stored in its rational embedding (`c1 = c2 = 0`) and
/// [`is_degenerate`](Self::is_degenerate) reports it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubicFieldElement {
    coeffs: [BigRational; 3],
    k: BigRational,
    rational_root: Option<BigRational>,
}

impl CubicFieldElement {
    pub fn new(c0: BigRational, c1: BigRational, c2: BigRational, k: BigRational) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::InvalidParameter("cubic field generator K must be positive".into()));
        }
        let rational_root = exact_nth_root(&k, 3);
        let coeffs = match &rational_root {
            Some(t) => [c0 + c1 * t + c2 * t * t, BigRational::zero(), BigRational::zero()],
            None => [c0, c1, c2],
        };
        Ok(Self { coeffs, k, rational_root })
    }

    pub fn from_rational(c: BigRational, k: BigRational) -> Result<Self> {
        Self::new(c, BigRational::zero(), BigRational::zero(), k)
    }

    /// The generator `t = K^(1/3)`.
    pub fn generator(k: BigRational) -> Result<Self> {
        Self::new(BigRational::zero(), BigRational::one(), BigRational::zero(), k)
    }

    pub fn coefficients(&self) -> &[BigRational; 3] {
        &self.coeffs
    }

    pub fn k(&self) -> &BigRational {
        &self.k
    }

    pub fn is_degenerate(&self) -> bool {
        self.rational_root.is_some()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1].is_zero() && self.coeffs[2].is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.k, other.k, "cubic field arithmetic across different generators");
    }

    fn with_coeffs(&self, coeffs: [BigRational; 3]) -> Self {
        Self { coeffs, k: self.k.clone(), rational_root: self.rational_root.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        self.with_coeffs(self.coeffs.clone().map(|x| x * c))
    }

    /// Enclosure of width strictly below `width`.
    pub fn enclose(&self, width: &BigRational) -> RationalInterval {
        if self.is_rational() {
            return RationalInterval::point(self.coeffs[0].clone());
        }
        let mut root = RootEnclosure::cube_root(self.k.clone()).expect("K is positive");
        // width of c1·t + c2·t² is at most (|c1| + |c2|·(2·hi + 1))·w for w ≤ 1
        let bound = BigRational::one() + root.interval().hi() * BigRational::from_integer(2.into());
        let gain = self.coeffs[1].abs() + self.coeffs[2].abs() * bound + BigRational::one();
        let mut w = (width / gain).min(BigRational::one());
        loop {
            let t = root.refine_to(&w);
            let t2 = t * t;
            let value = &(&t.scale(&self.coeffs[1]) + &t2.scale(&self.coeffs[2])).shift(&self.coeffs[0]);
            if value.width() < *width {
                return value.clone();
            }
            w /= BigRational::from_integer(2.into());
        }
    }

    /// A rational within `10^(-precision)` of the value.
    pub fn eval(&self, precision: u32) -> BigRational {
        let width = BigRational::new(BigInt::one(), pow10(precision));
        self.enclose(&width).midpoint()
    }

    /// Exact sign, decided by refining an enclosure until it excludes zero.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut width = BigRational::one();
        loop {
            let iv = self.enclose(&width);
            if iv.lo().is_positive() {
                return Ordering::Greater;
            }
            if iv.hi().is_negative() {
                return Ordering::Less;
            }
            width /= BigRational::from_integer(BigInt::from(1u64 << 32));
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        super::rational::to_f64(&self.eval(20))
    }
}

impl Add<&CubicFieldElement> for &CubicFieldElement {
    type Output = CubicFieldElement;
    fn add(self, rhs: &CubicFieldElement) -> CubicFieldElement {
        self.check_field(rhs);
        let [a0, a1, a2] = &self.coeffs;
        let [b0, b1, b2] = &rhs.coeffs;
        self.with_coeffs([a0 + b0, a1 + b1, a2 + b2])
    }
}

impl Sub<&CubicFieldElement> for &CubicFieldElement {
    type Output = CubicFieldElement;
    fn sub(self, rhs: &CubicFieldElement) -> CubicFieldElement {
        self + &(-rhs)
    }
}

impl Neg for &CubicFieldElement {
    type Output = CubicFieldElement;
    fn neg(self) -> CubicFieldElement {
        self.with_coeffs(self.coeffs.clone().map(|x| -x))
    }
}

impl Mul<&CubicFieldElement> for &CubicFieldElement {
    type Output = CubicFieldElement;
    fn mul(self, rhs: &CubicFieldElement) -> CubicFieldElement {
        self.check_field(rhs);
        let [a0, a1, a2] = &self.coeffs;
        let [b0, b1, b2] = &rhs.coeffs;
        let k = &self.k;
        // t³ = K, t⁴ = K·t
        let t3 = a1 * b2 + a2 * b1;
        let t4 = a2 * b2;
        self.with_coeffs([
            a0 * b0 + k * t3,
            a0 * b1 + a1 * b0 + k * t4,
            a0 * b2 + a1 * b1 + a2 * b0,
        ])
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CubicFieldElement {
            type Output = CubicFieldElement;
            fn $m(self, rhs: CubicFieldElement) -> CubicFieldElement {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for CubicFieldElement {
    type Output = CubicFieldElement;
    fn neg(self) -> CubicFieldElement {
        -&self
    }
}

/// Renders terms in descending degree, e.g. `2^(2/3) - 2^(1/3)` or
/// `1/3*5^(1/3) - 1/3`.
impl fmt::Display for CubicFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return f.write_str(&format_rational(&self.coeffs[0]));
        }
        let base = if self.k.denom().is_one() {
            format_rational(&self.k)
        } else {
            format!("({})", format_rational(&self.k))
        };
        let mut out = String::new();
        for (c, power) in [(&self.coeffs[2], Some("2/3")), (&self.coeffs[1], Some("1/3")), (&self.coeffs[0], None)] {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            match power {
                Some(pw) => {
                    if !magnitude.is_one() {
                        out.push_str(&format_rational(&magnitude));
                        out.push('*');
                    }
                    out.push_str(&format!("{base}^({pw})"));
                }
                None => out.push_str(&format_rational(&magnitude)),
            }
        }
        f.write_str(&out)
    }
}
