//! Exact real-root isolation for polynomials with rational coefficients.
//!
//! Isolation follows the Vincent–Collins–Akritas scheme: the interval of
//! interest is mapped onto `(0, ∞)` by a Möbius transform and Descartes' rule
//! of signs bounds the number of roots; intervals with more than one sign
//! change are bisected. Refinement is plain bisection on rational endpoints.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::interval::{sqrt_bounds, RationalInterval};
use crate::numerics::rational::{format_rational, pow10};

/// Univariate polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `x − root`.
    pub fn linear_root(root: BigRational) -> Self {
        Self::new(vec![-root, BigRational::one()])
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.eval(x).cmp(&BigRational::zero())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = &rem[i + dd] / &lc;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// `p(x + a)`.
    pub fn taylor_shift(&self, a: &BigRational) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        Self::new(c)
    }

    /// `x^deg · p(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// `p(c · x)`.
    pub fn scale_argument(&self, c: &BigRational) -> Self {
        let mut power = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for coeff in &self.coeffs {
            out.push(coeff * &power);
            power *= c;
        }
        Self::new(out)
    }

    /// Sign changes in the coefficient sequence, zeros skipped.
    pub fn sign_changes(&self) -> usize {
        let mut last: Option<bool> = None;
        let mut changes = 0;
        for c in self.coeffs.iter().filter(|c| !c.is_zero()) {
            let pos = c.is_positive();
            if last.is_some_and(|l| l != pos) {
                changes += 1;
            }
            last = Some(pos);
        }
        changes
    }

    /// Whether only even powers carry nonzero coefficients.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    /// `q` with `p(x) = q(x²)`; `None` unless `p` is even.
    pub fn even_part(&self) -> Option<Self> {
        self.is_even().then(|| Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// Upper bound on roots in the open interval `(a, b)`, exact when 0 or 1.
    fn interval_sign_changes(&self, a: &BigRational, b: &BigRational) -> usize {
        // r(y) = p(a + (b − a)y) on (0,1), then (1 + x)^n r(1/(1 + x))
        let mapped = self.taylor_shift(a).scale_argument(&(b - a));
        mapped.reversed().taylor_shift(&BigRational::one()).sign_changes()
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let coeff = if mag.is_one() && i > 0 { String::new() } else { format_rational(&mag) };
            let monomial = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            out.push_str(&coeff);
            out.push_str(&monomial);
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Descartes' bound on the number of positive real roots.
pub fn descartes_positive_bound(p: &Polynomial) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(p.sign_changes())
}

/// Isolating enclosures for every real root of `p` in the closed interval.
///
/// The input is reduced to its square-free part first. Roots are returned in
/// increasing order; an exact rational root may come back as a point
/// interval. Each non-point enclosure has nonzero values of opposite sign at
/// its endpoints (with respect to the square-free part).
pub fn isolate_roots_in(p: &Polynomial, interval: &RationalInterval) -> Result<Vec<RationalInterval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = p.square_free_part();
    if sf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let (lo, hi) = (interval.lo().clone(), interval.hi().clone());
    if lo == hi {
        return Ok(if sf.eval(&lo).is_zero() { vec![RationalInterval::point(lo)] } else { Vec::new() });
    }
    // deflate endpoint roots so the interior search sees nonzero endpoints
    let mut interior = sf.clone();
    let lo_root = sf.eval(&lo).is_zero();
    let hi_root = sf.eval(&hi).is_zero();
    if lo_root {
        interior = interior.div_rem(&Polynomial::linear_root(lo.clone())).0;
    }
    if hi_root {
        interior = interior.div_rem(&Polynomial::linear_root(hi.clone())).0;
    }
    let mut found = Vec::new();
    if lo_root {
        found.push(RationalInterval::point(lo.clone()));
    }
    let mut inner = Vec::new();
    isolate_open(&interior, lo.clone(), hi.clone(), &mut inner);
    for iv in inner {
        found.push(shrink_off_roots(&sf, &interior, iv));
    }
    if hi_root {
        found.push(RationalInterval::point(hi));
    }
    Ok(found)
}

fn isolate_open(p: &Polynomial, a: BigRational, b: BigRational, out: &mut Vec<RationalInterval>) {
    match p.interval_sign_changes(&a, &b) {
        0 => {}
        1 => out.push(RationalInterval::new(a, b).expect("ordered")),
        _ => {
            let m = (&a + &b) / BigRational::from_integer(BigInt::from(2));
            isolate_open(p, a, m.clone(), out);
            if p.eval(&m).is_zero() {
                out.push(RationalInterval::point(m.clone()));
            }
            isolate_open(p, m, b, out);
        }
    }
}

/// Bisects an isolating enclosure of `interior` until neither endpoint is a
/// root of `full` (endpoint roots of `full` were deflated out of `interior`).
fn shrink_off_roots(full: &Polynomial, interior: &Polynomial, mut iv: RationalInterval) -> RationalInterval {
    while !iv.is_point() && (full.eval(iv.lo()).is_zero() || full.eval(iv.hi()).is_zero()) {
        iv = bisect_once(interior, &iv);
    }
    iv
}

/// One bisection step on an enclosure with a sign change.
pub fn bisect_once(p: &Polynomial, iv: &RationalInterval) -> RationalInterval {
    if iv.is_point() {
        return iv.clone();
    }
    let m = iv.midpoint();
    let sm = p.sign_at(&m);
    if sm == Ordering::Equal {
        return RationalInterval::point(m);
    }
    if sm == p.sign_at(iv.lo()) {
        RationalInterval::new(m, iv.hi().clone()).expect("ordered")
    } else {
        RationalInterval::new(iv.lo().clone(), m).expect("ordered")
    }
}

/// Isolation of the roots of an even polynomial in `[lo, hi] ⊂ [0, ∞)`
/// through the substitution `u = y²`.
///
/// Each `u`-enclosure is mapped back through rational square-root bounds and
/// re-checked on `p` itself; if the mapped interval fails the single-root
/// test the `u`-enclosure is bisected and the bounds tightened.
pub fn isolate_even_roots_in(p: &Polynomial, interval: &RationalInterval) -> Result<Vec<RationalInterval>> {
    let q = p
        .even_part()
        .ok_or_else(|| Error::InvalidParameter("polynomial is not even".into()))?;
    if interval.lo().is_negative() {
        return Err(Error::InvalidParameter("even-root shortcut needs a non-negative interval".into()));
    }
    let sf = p.square_free_part();
    let squared = RationalInterval::new(interval.lo() * interval.lo(), interval.hi() * interval.hi())?;
    let mut out = Vec::new();
    for mut u in isolate_roots_in(&q, &squared)? {
        let q_sf = q.square_free_part();
        let mut slack = u.width() / BigRational::from_integer(BigInt::from(4));
        if slack.is_zero() {
            slack = BigRational::new(BigInt::one(), BigInt::from(1u64 << 20));
        }
        loop {
            let lo = sqrt_bounds(u.lo(), &slack).lo().clone().max(interval.lo().clone());
            let hi = sqrt_bounds(u.hi(), &slack).hi().clone().min(interval.hi().clone());
            if u.is_point() {
                if let Some(r) = crate::numerics::rational::exact_nth_root(u.lo(), 2) {
                    out.push(RationalInterval::point(r));
                    break;
                }
            }
            let candidate = RationalInterval::new(lo, hi)?;
            let s_lo = sf.sign_at(candidate.lo());
            let s_hi = sf.sign_at(candidate.hi());
            if s_lo != Ordering::Equal
                && s_hi != Ordering::Equal
                && s_lo != s_hi
                && sf.interval_sign_changes(candidate.lo(), candidate.hi()) == 1
            {
                out.push(candidate);
                break;
            }
            u = bisect_once(&q_sf, &u);
            slack /= BigRational::from_integer(BigInt::from(4));
        }
    }
    Ok(out)
}

/// Bisects `enclosure` until its width is below `10^(-digits)`.
///
/// The result still brackets the root: either a sign change at the
/// endpoints or an exact point root.
pub fn refine_root(p: &Polynomial, enclosure: &RationalInterval, digits: u32) -> Result<RationalInterval> {
    let eps = BigRational::new(BigInt::one(), pow10(digits));
    refine_to_width(p, enclosure, &eps)
}

pub fn refine_to_width(p: &Polynomial, enclosure: &RationalInterval, width: &BigRational) -> Result<RationalInterval> {
    if enclosure.is_point() {
        return if p.eval(enclosure.lo()).is_zero() { Ok(enclosure.clone()) } else { Err(Error::NonIsolating) };
    }
    let s_lo = p.sign_at(enclosure.lo());
    let s_hi = p.sign_at(enclosure.hi());
    if s_lo == Ordering::Equal {
        return Ok(RationalInterval::point(enclosure.lo().clone()));
    }
    if s_hi == Ordering::Equal {
        return Ok(RationalInterval::point(enclosure.hi().clone()));
    }
    if s_lo == s_hi {
        return Err(Error::NonIsolating);
    }
    let mut iv = enclosure.clone();
    while !iv.is_point() && iv.width() >= *width {
        iv = bisect_once(p, &iv);
    }
    Ok(iv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    fn iv(lo: BigRational, hi: BigRational) -> RationalInterval {
        RationalInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn arithmetic() {
        let p = Polynomial::from_integers(&[-1, 1]);
        let q = Polynomial::from_integers(&[1, 1]);
        assert_eq!(&p * &q, Polynomial::from_integers(&[-1, 0, 1]));
        let (quot, rem) = Polynomial::from_integers(&[-1, 0, 1]).div_rem(&p);
        assert_eq!(quot, q);
        assert!(rem.is_zero());
        assert_eq!(Polynomial::from_integers(&[1, 2, 1]).gcd(&Polynomial::from_integers(&[2, 2])), q);
        assert_eq!(Polynomial::from_integers(&[0, 0, 3]).derivative(), Polynomial::from_integers(&[0, 6]));
        assert_eq!(Polynomial::from_integers(&[0, 0, 1]).taylor_shift(&int(1)), Polynomial::from_integers(&[1, 2, 1]));
        assert_eq!(Polynomial::from_integers(&[1, 2, 0]).degree(), Some(1));
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn descartes_examples() {
        let octic = Polynomial::from_integers(&[2, 0, -7, 0, -1, 0, 3, 0, 1]);
        assert_eq!(descartes_positive_bound(&octic).unwrap(), 2);
        assert_eq!(descartes_positive_bound(&Polynomial::from_integers(&[1, 0, 1])).unwrap(), 0);
        assert_eq!(descartes_positive_bound(&Polynomial::from_integers(&[-1, 1])).unwrap(), 1);
        assert_eq!(descartes_positive_bound(&Polynomial::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn isolates_cube_root() {
        let p = Polynomial::from_integers(&[-2, 0, 0, 1]);
        let roots = isolate_roots_in(&p, &iv(int(1), int(2))).unwrap();
        assert_eq!(roots.len(), 1);
        let refined = refine_root(&p, &roots[0], 12).unwrap();
        assert!(refined.width() < rat(1, 1_000_000_000_000));
        let mid = refined.midpoint();
        let cube = &mid * &mid * &mid;
        assert!((cube - int(2)).abs() < rat(3, 1_000_000_000_000));
    }

    #[test]
    fn linear_root_collapses() {
        let p = Polynomial::from_integers(&[-1, 2]);
        assert_eq!(refine_root(&p, &iv(int(0), int(1)), 20).unwrap(), RationalInterval::point(rat(1, 2)));
    }

    #[test]
    fn non_isolating_is_reported() {
        let p = Polynomial::from_integers(&[1, 0, 1]);
        assert_eq!(refine_root(&p, &iv(int(0), int(1)), 5), Err(Error::NonIsolating));
        assert_eq!(refine_root(&p, &RationalInterval::point(int(0)), 5), Err(Error::NonIsolating));
    }

    #[test]
    fn endpoint_and_multiple_roots() {
        // (x − 1)²(x − 2)(x − 3/2) on [1, 2]
        let p = &(&Polynomial::from_integers(&[1, -2, 1]) * &Polynomial::from_integers(&[-2, 1]))
            * &Polynomial::new(vec![rat(-3, 2), int(1)]);
        let roots = isolate_roots_in(&p, &iv(int(1), int(2))).unwrap();
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[0], RationalInterval::point(int(1)));
        assert!(roots[1].contains(&rat(3, 2)));
        assert_eq!(roots[2], RationalInterval::point(int(2)));
    }

    #[test]
    fn endpoint_root_next_to_interior_root() {
        // roots 0 and 1/1000 on [0, 1]: the interior enclosure must not touch 0
        let p = &Polynomial::from_integers(&[0, 1]) * &Polynomial::new(vec![rat(-1, 1000), int(1)]);
        let roots = isolate_roots_in(&p, &iv(int(0), int(1))).unwrap();
        assert_eq!(roots.len(), 2);
        let second = &roots[1];
        assert!(second.contains(&rat(1, 1000)));
        assert!(!p.eval(second.lo()).is_zero() || second.is_point());
    }

    #[test]
    fn even_shortcut_matches_generic() {
        for k in [2i64, 3] {
            let km1 = k - 1;
            let octic = Polynomial::from_integers(&[
                k,
                0,
                -(4 * k - 1),
                0,
                -km1 * (2 * k - 3),
                0,
                3 * km1 * km1,
                0,
                km1 * km1 * km1,
            ]);
            let unit = iv(int(0), int(1));
            let generic = isolate_roots_in(&octic, &unit).unwrap();
            let even = isolate_even_roots_in(&octic, &unit).unwrap();
            assert_eq!(generic.len(), even.len());
            for (g, e) in generic.iter().zip(&even) {
                let rg = refine_root(&octic, g, 20).unwrap();
                let re = refine_root(&octic, e, 20).unwrap();
                assert!((rg.midpoint() - re.midpoint()).abs() < rat(1, 1_000_000_000_000_000_000));
            }
        }
        assert!(isolate_even_roots_in(&Polynomial::from_integers(&[0, 1]), &iv(int(0), int(1))).is_err());
    }

    #[test]
    fn display() {
        let octic = Polynomial::from_integers(&[2, 0, -7, 0, -1, 0, 3, 0, 1]);
        assert_eq!(octic.display_in("y"), "y^8 + 3y^6 - y^4 - 7y^2 + 2");
        assert_eq!(Polynomial::from_integers(&[-1, 2]).to_string(), "2x - 1");
    }
}
