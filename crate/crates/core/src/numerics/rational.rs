//! Helpers around [`BigRational`]: construction, the canonical `p/q` text
//! form, decimal rendering and exact nth roots.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `n/d` as a reduced rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), exp as usize)
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or a decimal literal such as `-1.25e-3`.
/// Decimal literals are converted exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let mut numer = BigInt::from_str(if joined.is_empty() { "0" } else { &joined }).map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i64;
    let magnitude = u32::try_from(scale.unsigned_abs()).map_err(|_| bad())?;
    Ok(if scale >= 0 {
        BigRational::from_integer(numer * pow10(magnitude))
    } else {
        BigRational::new(numer, pow10(magnitude))
    })
}

/// How [`to_decimal`] disposes of digits past the requested precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    /// Round half away from zero.
    #[default]
    Nearest,
    /// Drop the remaining digits (round toward zero).
    Truncate,
}

/// Fixed-point decimal rendering with exactly `places` fractional digits.
pub fn to_decimal(r: &BigRational, places: u32, rounding: Rounding) -> String {
    let scale = pow10(places);
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let digits = match rounding {
        Rounding::Truncate => scaled.trunc().to_integer(),
        Rounding::Nearest => (scaled + BigRational::new(BigInt::one(), BigInt::from(2)))
            .floor()
            .to_integer(),
    };
    let negative = r.is_negative() && !digits.is_zero();
    let (whole, frac) = digits.div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = places as usize)
    }
}

/// Decimal rendering of a float through its exact binary value.
pub fn f64_to_decimal(x: f64, places: u32, rounding: Rounding) -> String {
    match BigRational::from_float(x) {
        Some(r) => to_decimal(&r, places, rounding),
        None => x.to_string(),
    }
}

pub fn floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Exact rational nth root when one exists.
pub fn exact_nth_root(r: &BigRational, n: u32) -> Option<BigRational> {
    if r.is_negative() {
        if n % 2 == 0 {
            return None;
        }
        return exact_nth_root(&-r, n).map(|x| -x);
    }
    let a = r.numer().nth_root(n);
    let b = r.denom().nth_root(n);
    if num_traits::pow(a.clone(), n as usize) == *r.numer()
        && num_traits::pow(b.clone(), n as usize) == *r.denom()
    {
        Some(BigRational::new(a, b))
    } else {
        None
    }
}

/// Number of decimal digits of the absolute value of `n`.
pub fn decimal_digits(n: &BigInt) -> usize {
    let s = n.abs().to_string();
    s.len()
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
