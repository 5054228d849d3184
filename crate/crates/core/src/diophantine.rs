//! Rational approximations of cube roots.
//!
//! The exact Sinkhorn iterates of `A6(K)` are rational and converge to a
//! limit in ℚ(K^(1/3)), so each of the entries `(1,3)`, `(2,2)`, `(3,1)`
//! yields a sequence `(K−1)·a + 1 → K^(1/3)`. The ratio `a11/a13` converges
//! to `K^(1/3)` as well. Continued fractions of the same target give a point
//! of comparison.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::families::{FamilySpec, FamilyTag};
use crate::numerics::rational::{decimal_digits, exact_nth_root, pow10};
use crate::numerics::{algebraic_floor, format_rational, to_decimal, RationalInterval, RootEnclosure, Rounding};
use crate::roots::{bisect_once, isolate_roots_in, Polynomial};
use crate::scaling::sinkhorn_iterate;

/// Width of the enclosure of `K^(1/3)` used to certify error bounds.
const TARGET_DIGITS: u32 = 80;

/// Entries of one exact iterate of `A6(K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantRow {
    /// Elementary step, starting at 1 with the first row scaling.
    pub step: usize,
    pub a11: BigRational,
    pub a13: BigRational,
    pub a22: BigRational,
    pub a31: BigRational,
    /// `(K−1)·a + 1` for `a13`, `a22`, `a31`.
    pub estimates: [BigRational; 3],
    /// Upper bounds on `|estimate − K^(1/3)|`.
    pub error_bounds: [BigRational; 3],
    /// `a11/a13`.
    pub ratio: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantTable {
    pub k: BigInt,
    /// `K` is a perfect cube, so the limit is rational.
    pub perfect_cube: bool,
    pub rows: Vec<ApproximantRow>,
}

fn k_rational(k: &BigInt) -> Result<BigRational> {
    if k < &BigInt::from(2) {
        return Err(Error::InvalidParameter("K must be an integer at least 2".into()));
    }
    Ok(BigRational::from_integer(k.clone()))
}

fn cbrt_enclosure(k: &BigRational) -> Result<RationalInterval> {
    let mut root = RootEnclosure::cube_root(k.clone())?;
    Ok(root.refine_to(&BigRational::new(BigInt::one(), pow10(TARGET_DIGITS))).clone())
}

/// `max(|x − lo|, |x − hi|)`: bounds `|x − t|` for every `t` in `iv`.
fn error_bound(x: &BigRational, iv: &RationalInterval) -> BigRational {
    let a = (x - iv.lo()).abs();
    let b = (x - iv.hi()).abs();
    if a > b {
        a
    } else {
        b
    }
}

/// Runs the exact iteration on `A6(K)` for `steps` elementary steps.
pub fn cbrt_approximants(k: &BigInt, steps: usize) -> Result<ApproximantTable> {
    let kq = k_rational(k)?;
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let target = cbrt_enclosure(&kq)?;
    let a6 = FamilySpec::family(FamilyTag::A6, kq.clone())?.matrix();
    let trace = sinkhorn_iterate(&a6, steps)?;
    let k1 = &kq - BigRational::one();
    let rows = trace
        .snapshots()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let (a13, a22, a31) = (m.get(0, 2).clone(), m.get(1, 1).clone(), m.get(2, 0).clone());
            let estimates = [&a13, &a22, &a31].map(|a| &k1 * a + BigRational::one());
            let error_bounds = estimates.clone().map(|e| error_bound(&e, &target));
            ApproximantRow {
                step: i + 1,
                a11: m.get(0, 0).clone(),
                ratio: m.get(0, 0) / &a13,
                a13,
                a22,
                a31,
                estimates,
                error_bounds,
            }
        })
        .collect();
    Ok(ApproximantTable { perfect_cube: exact_nth_root(&kq, 3).is_some(), k: k.clone(), rows })
}

impl ApproximantTable {
    /// Fractions per step, then the cube-root estimates as decimals.
    pub fn to_text(&self, places: u32, rounding: Rounding) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "K = {}{}", self.k, if self.perfect_cube { " (perfect cube)" } else { "" });
        let _ = writeln!(out, "\nestimates (K-1)*a + 1 of K^(1/3), with error bounds");
        let _ = writeln!(out, "{:>4}  {:>16}  {:>10}  {:>16}  {:>10}  {:>16}  {:>10}", "step", "a13", "error", "a22", "error", "a31", "error");
        for r in &self.rows {
            let _ = write!(out, "{:>4}", r.step);
            for (e, b) in r.estimates.iter().zip(&r.error_bounds) {
                let _ = write!(out, "  {:>16}  {:>10.3e}", to_decimal(e, places, rounding), crate::numerics::rational::to_f64(b));
            }
            out.push('\n');
        }
        let _ = writeln!(out, "\nexact iterates");
        let _ = writeln!(out, "{:>4}  a13  a22  a31", "step");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>4}  {}  {}  {}",
                r.step,
                format_rational(&r.a13),
                format_rational(&r.a22),
                format_rational(&r.a31)
            );
        }
        out
    }

    pub fn to_json(&self, places: u32, rounding: Rounding) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "step": r.step,
                    "a13": format_rational(&r.a13),
                    "a22": format_rational(&r.a22),
                    "a31": format_rational(&r.a31),
                    "a11": format_rational(&r.a11),
                    "estimates": r.estimates.iter().map(|e| to_decimal(e, places, rounding)).collect::<Vec<_>>(),
                    "error_bounds": r.error_bounds.iter().map(crate::numerics::rational::to_f64).collect::<Vec<_>>(),
                    "ratio": to_decimal(&r.ratio, places, rounding),
                })
            })
            .collect();
        json!({ "K": self.k.to_string(), "perfect_cube": self.perfect_cube, "rows": rows })
    }
}

/// Partial quotients of a real root with the convergents they produce.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuedFraction {
    pub terms: Vec<BigInt>,
    /// `p_i/q_i` for `i = 0, 1, …`, one per term.
    pub convergents: Vec<BigRational>,
    /// Enclosure of the `i`-th complete quotient at the time term `i` was
    /// emitted; both ends have floor `terms[i]`.
    pub certificates: Vec<RationalInterval>,
}

impl ContinuedFraction {
    pub fn from_terms(terms: Vec<BigInt>, certificates: Vec<RationalInterval>) -> Self {
        let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
        let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
        let mut convergents = Vec::with_capacity(terms.len());
        for a in &terms {
            let p = a * &p1 + &p0;
            let q = a * &q1 + &q0;
            convergents.push(BigRational::new(p.clone(), q.clone()));
            (p0, p1, q0, q1) = (p1, p, q1, q);
        }
        Self { terms, convergents, certificates }
    }
}

/// The first `n_terms` partial quotients of the root of `p` isolated by
/// `enclosure`, which must lie in `[0, ∞)`.
///
/// Each step takes the certified floor `a` of the current complete quotient
/// `x` and continues with `1/(x − a)`, a root of `y^d·p(a + 1/y)`. A
/// rational root is detected exactly and reported as
/// [`Error::RationalRoot`] with its finite expansion.
pub fn cfrac_algebraic(p: &Polynomial, enclosure: &RationalInterval, n_terms: usize) -> Result<ContinuedFraction> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if enclosure.lo().is_negative() {
        return Err(Error::InvalidParameter("enclosure must lie in [0, inf)".into()));
    }
    let mut poly = p.square_free_part();
    let mut iv = enclosure.clone();
    let mut terms = Vec::with_capacity(n_terms);
    let mut certificates = Vec::with_capacity(n_terms);
    while terms.len() < n_terms {
        let (a, mut cert) = algebraic_floor(&poly, &iv)?;
        terms.push(a.clone());
        let aq = BigRational::from_integer(a);
        // the root exceeds a, but the enclosure may still touch it
        while cert.lo() == &aq {
            if cert.is_point() {
                return Err(Error::RationalRoot(terms));
            }
            cert = bisect_once(&poly, &cert);
        }
        certificates.push(cert.clone());
        let lo = (cert.hi() - &aq).recip();
        let hi = (cert.lo() - &aq).recip();
        poly = poly.taylor_shift(&aq).reversed();
        iv = RationalInterval::new(lo, hi)?;
    }
    Ok(ContinuedFraction::from_terms(terms, certificates))
}

/// `(t + 1)³ − K` with the enclosure of its positive root `K^(1/3) − 1`.
pub fn cbrt_minus_one(k: &BigRational) -> Result<(Polynomial, RationalInterval)> {
    if !k.is_positive() {
        return Err(Error::InvalidParameter("K must be positive".into()));
    }
    let one = BigRational::one();
    let three = BigRational::from_integer(3.into());
    let p = Polynomial::new(vec![&one - k, three.clone(), three, one.clone()]);
    if k < &one {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    let bound = RationalInterval::new(BigRational::zero(), k.clone())?;
    let roots = isolate_roots_in(&p, &bound)?;
    let iv = roots.into_iter().next().ok_or(Error::NonIsolating)?;
    Ok((p, iv))
}

/// `t³ − K` with the enclosure of `K^(1/3)`.
pub fn cbrt(k: &BigRational) -> Result<(Polynomial, RationalInterval)> {
    if !k.is_positive() {
        return Err(Error::InvalidParameter("K must be positive".into()));
    }
    let one = BigRational::one();
    let p = Polynomial::new(vec![-k.clone(), BigRational::zero(), BigRational::zero(), one.clone()]);
    let bound = RationalInterval::new(BigRational::zero(), k.clone().max(one))?;
    let iv = isolate_roots_in(&p, &bound)?.into_iter().next().ok_or(Error::NonIsolating)?;
    Ok((p, iv))
}

/// One approximation of `K^(1/3) − 1` with its certified error.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub label: String,
    pub value: BigRational,
    pub error_bound: BigRational,
    pub denominator_digits: usize,
}

impl CompareRow {
    fn new(label: String, value: BigRational, target: &RationalInterval) -> Self {
        Self {
            label,
            error_bound: error_bound(&value, target),
            denominator_digits: decimal_digits(value.denom()),
            value,
        }
    }
}

/// Sinkhorn estimates `(K−1)·a` of `K^(1/3) − 1` beside the
/// continued-fraction convergents of the same number.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub k: BigInt,
    pub target: RationalInterval,
    pub sinkhorn: Vec<CompareRow>,
    pub convergents: Vec<CompareRow>,
}

/// `steps` exact iterates and convergents `1..=cf_terms`.
pub fn compare_report(k: &BigInt, steps: usize, cf_terms: usize) -> Result<CompareReport> {
    let kq = k_rational(k)?;
    let k1 = &kq - BigRational::one();
    let mut target = cbrt_enclosure(&kq)?;
    target = target.shift(&-BigRational::one());
    let table = cbrt_approximants(k, steps)?;
    let mut sinkhorn = Vec::new();
    for r in &table.rows {
        for (name, a) in [("a13", &r.a13), ("a22", &r.a22), ("a31", &r.a31)] {
            sinkhorn.push(CompareRow::new(format!("{name}({})", r.step), &k1 * a, &target));
        }
    }
    let (p, iv) = cbrt_minus_one(&kq)?;
    let cf = match cfrac_algebraic(&p, &iv, cf_terms + 1) {
        Ok(cf) => cf,
        Err(Error::RationalRoot(terms)) => ContinuedFraction::from_terms(terms, Vec::new()),
        Err(e) => return Err(e),
    };
    let convergents = cf
        .convergents
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| CompareRow::new(format!("c{i}"), c.clone(), &target))
        .collect();
    Ok(CompareReport { k: k.clone(), target, sinkhorn, convergents })
}

impl CompareReport {
    pub fn to_text(&self, places: u32, rounding: Rounding) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "K^(1/3) - 1 = {} (K = {})",
            to_decimal(&self.target.midpoint(), places, rounding),
            self.k
        );
        for (title, rows) in [("Sinkhorn (K-1)*a", &self.sinkhorn), ("continued fraction", &self.convergents)] {
            let _ = writeln!(out, "\n{title}");
            let _ = writeln!(out, "{:>8}  {:>14}  {:>10}  {:>6}  fraction", "label", "decimal", "error", "digits");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{:>8}  {:>14}  {:>10.3e}  {:>6}  {}",
                    r.label,
                    to_decimal(&r.value, places, rounding),
                    crate::numerics::rational::to_f64(&r.error_bound),
                    r.denominator_digits,
                    format_rational(&r.value)
                );
            }
        }
        out
    }

    pub fn to_json(&self, places: u32, rounding: Rounding) -> Value {
        let rows = |rows: &[CompareRow]| -> Vec<Value> {
            rows.iter()
                .map(|r| {
                    json!({
                        "label": r.label,
                        "value": format_rational(&r.value),
                        "decimal": to_decimal(&r.value, places, rounding),
                        "error_bound": crate::numerics::rational::to_f64(&r.error_bound),
                        "denominator_digits": r.denominator_digits,
                    })
                })
                .collect()
        };
        json!({
            "K": self.k.to_string(),
            "target": to_decimal(&self.target.midpoint(), places, rounding),
            "sinkhorn": rows(&self.sinkhorn),
            "convergents": rows(&self.convergents),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat, to_f64};

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    fn frac(n: &str, d: &str) -> BigRational {
        BigRational::new(big(n), big(d))
    }

    #[test]
    fn first_iterates_of_a6() {
        let t = cbrt_approximants(&BigInt::from(2), 3).unwrap();
        assert_eq!((t.rows[0].a13.clone(), t.rows[0].a22.clone(), t.rows[0].a31.clone()), (rat(1, 5), rat(1, 4), rat(1, 3)));
        assert_eq!((t.rows[1].a13.clone(), t.rows[1].a22.clone(), t.rows[1].a31.clone()), (rat(12, 47), rat(15, 59), rat(10, 37)));
        assert_eq!(t.rows[2].a13, rat(2183, 8434));
        assert!(!t.perfect_cube);
    }

    #[test]
    fn sixth_iterate() {
        let t = cbrt_approximants(&BigInt::from(2), 6).unwrap();
        let r = &t.rows[5];
        assert_eq!(r.a13, frac("41433243878974147831553607829895895", "159407905344245227309688080035616727"));
        assert_eq!(r.a31, frac("32886086324729567223915642757046161", "126521819019515660085772437278570566"));
        assert_eq!(to_decimal(&r.a31, 10, Rounding::Nearest), "0.2599242295");
        // both readings of the limit: affine in a13 and the ratio a11/a13
        assert!(to_f64(&r.error_bounds[0]) < 1e-5);
        assert!((to_f64(&r.ratio) - 2f64.cbrt()).abs() < 1e-3);
    }

    #[test]
    fn estimate_errors_decrease() {
        for k in [2, 3, 5] {
            let t = cbrt_approximants(&BigInt::from(k), 8).unwrap();
            for j in 0..3 {
                let errs: Vec<f64> = t.rows.iter().map(|r| to_f64(&r.error_bounds[j])).collect();
                assert!(errs.windows(2).all(|w| w[1] <= w[0]), "K = {k}, entry {j}: {errs:?}");
            }
        }
    }

    #[test]
    fn perfect_cube_converges_to_integer() {
        let t = cbrt_approximants(&BigInt::from(8), 12).unwrap();
        assert!(t.perfect_cube);
        let errs: Vec<f64> = t.rows.iter().map(|r| (to_f64(&r.estimates[0]) - 2.0).abs()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]));
        assert!(errs[11] < 1e-2, "{errs:?}");
        assert!(cbrt_approximants(&BigInt::from(1), 3).is_err());
    }

    #[test]
    fn cfrac_of_cube_root_of_two_minus_one() {
        let (p, iv) = cbrt_minus_one(&int(2)).unwrap();
        assert_eq!(p, Polynomial::from_integers(&[-1, 3, 3, 1]));
        let cf = cfrac_algebraic(&p, &iv, 14).unwrap();
        let expect: Vec<BigInt> = [0, 3, 1, 5, 1, 1, 4, 1, 1, 8, 1, 14, 1, 10].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(cf.terms, expect);
        let printed = [(1, 3), (1, 4), (6, 23), (7, 27), (13, 50), (59, 227), (72, 277), (131, 504), (1120, 4309), (1251, 4813)];
        for (i, (n, d)) in printed.iter().enumerate() {
            assert_eq!(cf.convergents[i + 1], rat(*n, *d));
        }
        assert_eq!(cf.convergents[0], int(0));
        for (a, c) in cf.terms.iter().zip(&cf.certificates) {
            assert_eq!(&crate::numerics::rational::floor(c.lo()), a);
            assert_eq!(&crate::numerics::rational::floor(c.hi()), a);
        }
    }

    #[test]
    fn cfrac_of_rational_root_terminates() {
        let p = Polynomial::from_integers(&[-1, 2]);
        let iv = RationalInterval::new(int(0), int(1)).unwrap();
        assert_eq!(cfrac_algebraic(&p, &iv, 5), Err(Error::RationalRoot(vec![BigInt::from(0), BigInt::from(2)])));
        let p = Polynomial::from_integers(&[-7, 3]);
        let iv = RationalInterval::new(int(2), int(3)).unwrap();
        let terms = [2, 3].map(BigInt::from).to_vec();
        assert_eq!(cfrac_algebraic(&p, &iv, 9), Err(Error::RationalRoot(terms)));
    }

    #[test]
    fn cfrac_of_cube_root() {
        let (p, iv) = cbrt(&int(3)).unwrap();
        let cf = cfrac_algebraic(&p, &iv, 6).unwrap();
        // 3^(1/3) = [1; 2, 3, 1, 4, 1, ...]
        assert_eq!(cf.terms, [1, 2, 3, 1, 4, 1].map(BigInt::from).to_vec());
    }

    #[test]
    fn convergents_bracket_target() {
        let (p, iv) = cbrt_minus_one(&int(5)).unwrap();
        let cf = cfrac_algebraic(&p, &iv, 12).unwrap();
        let target = 5f64.cbrt() - 1.0;
        for (i, w) in cf.convergents.windows(2).enumerate() {
            let (c, d) = (to_f64(&w[0]), to_f64(&w[1]));
            assert!((c - target) * (d - target) < 0.0 || c == target, "index {i}");
            let bound = 1.0 / (to_f64(&BigRational::from_integer(w[0].denom().clone())) * to_f64(&BigRational::from_integer(w[1].denom().clone())));
            assert!((c - target).abs() < bound);
        }
    }

    #[test]
    fn report_values() {
        let r = compare_report(&BigInt::from(2), 6, 10).unwrap();
        assert_eq!(r.convergents.len(), 10);
        let c5 = &r.convergents[4];
        assert_eq!(c5.value, rat(13, 50));
        assert_eq!(to_decimal(&c5.value, 10, Rounding::Nearest), "0.2600000000");
        assert_eq!(to_decimal(&r.convergents[3].value, 10, Rounding::Nearest), "0.2592592593");
        let first = &r.sinkhorn[0];
        assert_eq!(first.value, rat(1, 5));
        assert!((to_f64(&first.error_bound) - (2f64.cbrt() - 1.2)).abs() < 1e-12);
        let text = r.to_text(10, Rounding::Nearest);
        assert!(text.contains("0.2599210499"));
        assert!(text.contains("0.2599242295"));
        assert!(text.contains("1251/4813"));
    }
}
