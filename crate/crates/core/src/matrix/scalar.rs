use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::numerics::rational::{f64_to_decimal, format_rational, parse_rational};
use crate::numerics::Rounding;

/// Arithmetic mode of a matrix. Never mixed within one matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Float,
    Rational,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Float => "float",
            Mode::Rational => "rational",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "float" | "f64" => Ok(Mode::Float),
            "rational" | "exact" => Ok(Mode::Rational),
            other => Err(Error::Malformed(format!("unknown mode {other:?}"))),
        }
    }
}

/// Entry type of a [`Matrix`](super::Matrix): `f64` or [`BigRational`].
pub trait Scalar: Num + Signed + Clone + PartialOrd + fmt::Debug + Send + Sync + 'static {
    const MODE: Mode;

    fn from_rational(r: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact value; `None` for non-finite floats.
    fn to_rational(&self) -> Option<BigRational>;

    /// Exact equality for rationals, relative tolerance for floats.
    fn approx_eq(&self, other: &Self, rel: f64) -> bool;

    /// Floats as fixed-point decimals, rationals as `p/q`.
    fn render(&self, places: u32, rounding: Rounding) -> String;

    fn parse(s: &str) -> Result<Self>;

    /// Default tolerance for double stochasticity of an `n`-column matrix.
    fn default_tolerance(n: usize) -> Self;
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_f64(*self)
    }

    fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        let scale = self.abs().max(other.abs()).max(f64::MIN_POSITIVE);
        (self - other).abs() <= rel * scale
    }

    fn render(&self, places: u32, rounding: Rounding) -> String {
        f64_to_decimal(*self, places, rounding)
    }

    fn parse(s: &str) -> Result<Self> {
        if let Ok(x) = s.trim().parse::<f64>() {
            return Ok(x);
        }
        parse_rational(s).map(|r| ToPrimitive::to_f64(&r).unwrap_or(f64::NAN))
    }

    fn default_tolerance(n: usize) -> Self {
        1e-12 * n as f64
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Rational;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn approx_eq(&self, other: &Self, _rel: f64) -> bool {
        self == other
    }

    fn render(&self, _places: u32, _rounding: Rounding) -> String {
        format_rational(self)
    }

    fn parse(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn default_tolerance(_n: usize) -> Self {
        num_traits::Zero::zero()
    }
}
