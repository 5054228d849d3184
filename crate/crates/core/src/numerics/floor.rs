use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::interval::RationalInterval;
use super::rational::floor;
use crate::error::{Error, Result};
use crate::roots::{bisect_once, Polynomial};

/// Floor of the unique root of `p` inside `enclosure`, with the certifying
/// enclosure.
///
/// The returned enclosure still brackets the root and satisfies
/// `⌊lo⌋ = ⌊hi⌋`. Integer roots are detected exactly and returned as a point
/// enclosure.
pub fn algebraic_floor(p: &Polynomial, enclosure: &RationalInterval) -> Result<(BigInt, RationalInterval)> {
    let sign = |x: &BigRational| p.sign_at(x);
    if enclosure.is_point() {
        return if sign(enclosure.lo()) == Ordering::Equal {
            Ok((floor(enclosure.lo()), enclosure.clone()))
        } else {
            Err(Error::NonIsolating)
        };
    }
    let (s_lo, s_hi) = (sign(enclosure.lo()), sign(enclosure.hi()));
    if s_lo == Ordering::Equal {
        let x = enclosure.lo().clone();
        return Ok((floor(&x), RationalInterval::point(x)));
    }
    if s_hi == Ordering::Equal {
        let x = enclosure.hi().clone();
        return Ok((floor(&x), RationalInterval::point(x)));
    }
    if s_lo == s_hi {
        return Err(Error::NonIsolating);
    }
    let mut iv = enclosure.clone();
    loop {
        if iv.is_point() {
            return Ok((floor(iv.lo()), iv));
        }
        let f = floor(iv.lo());
        if floor(iv.hi()) == f {
            return Ok((f, iv));
        }
        let next = BigRational::from_integer(f + BigInt::one());
        if iv.width() <= BigRational::one() && next < *iv.hi() {
            // a single integer lies strictly inside: test it exactly
            match sign(&next) {
                Ordering::Equal => return Ok((next.to_integer(), RationalInterval::point(next))),
                s if s == s_lo => iv = RationalInterval::new(next, iv.hi().clone())?,
                _ => iv = RationalInterval::new(iv.lo().clone(), next)?,
            }
        } else {
            iv = bisect_once(p, &iv);
        }
    }
}
