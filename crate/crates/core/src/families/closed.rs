use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{FamilyLimit, FamilyTag, LimitEntry, MbnParams, Shape, StochasticCheck};
use crate::error::{Error, Result};
use crate::numerics::{AlgebraicScalar, CubicFieldElement, QuadraticSurd};

fn q(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn check_k(k: &BigRational) -> Result<()> {
    if !k.is_positive() {
        return Err(Error::InvalidParameter("K must be positive".into()));
    }
    if k.is_one() {
        return Err(Error::DegenerateK);
    }
    Ok(())
}

/// Non-negative square root, kept in ℚ(√D) when the radicand is rational.
fn sqrt_scalar(v: AlgebraicScalar) -> AlgebraicScalar {
    match v.to_rational() {
        Some(r) => QuadraticSurd::sqrt_of(&r).expect("non-negative radicand").into(),
        None => AlgebraicScalar::sqrt(v),
    }
}

/// `a = K/(K+2)`, `b = 1/(K+2)`: a single row scaling is already doubly
/// stochastic.
pub fn limit_a1(k: &BigRational, precision: u32) -> Result<FamilyLimit> {
    check_k(k)?;
    let denom = k + q(2);
    let a = AlgebraicScalar::Rational(k / &denom);
    let b = AlgebraicScalar::Rational(denom.recip());
    let x = QuadraticSurd::sqrt_of(&denom.recip())?;
    Ok(FamilyLimit::assemble(
        FamilyTag::A1,
        Shape::Circulant,
        vec![LimitEntry::exact("a", a, precision), LimitEntry::exact("b", b, precision)],
        vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        vec![LimitEntry::exact("x", x.into(), precision)],
        vec![0; 3],
    ))
}

fn mbn_limit(tag: FamilyTag, p: &MbnParams, precision: u32) -> Result<FamilyLimit> {
    let (k, l, n) = (q(p.k), q(p.l), q(p.size()));
    let r = p.ratio();
    let one = QuadraticSurd::from_rational(BigRational::one());
    let a = if r.is_one() {
        QuadraticSurd::from_rational(n.recip())
    } else {
        // minus branch of the quadratic in x²; it is the one with a < 1/k
        let radicand = q(4) * &k * &l * &r + (&k - &l) * (&k - &l);
        let root = QuadraticSurd::sqrt_of(&radicand)?;
        let denom = q(2) * &k * &k * (&r - BigRational::one());
        &(&(&QuadraticSurd::from_rational(n.clone()) - &root) / &denom) + &k.recip()
    };
    let b = &(&one - &(&a * &k)) / &l;
    let c = &(&one - &(&b * &k)) / &l;
    let x = sqrt_scalar((&a / &p.m).into());
    let y = sqrt_scalar((&c / &p.n).into());
    let size = p.size();
    let pattern = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| match (i < p.k, j < p.k) {
                    (true, true) => 0,
                    (false, false) => 2,
                    _ => 1,
                })
                .collect()
        })
        .collect();
    let scaling_pattern = (0..size).map(|i| usize::from(i >= p.k)).collect();
    Ok(FamilyLimit::assemble(
        tag,
        Shape::Block,
        vec![
            LimitEntry::exact("a", a.into(), precision),
            LimitEntry::exact("b", b.into(), precision),
            LimitEntry::exact("c", c.into(), precision),
        ],
        pattern,
        vec![LimitEntry::exact("x", x, precision), LimitEntry::exact("y", y, precision)],
        scaling_pattern,
    ))
}

/// Block limit `a` on the `k×k` block, `b` off-diagonal, `c` on the `l×l`
/// block, with
/// `a = 1/k + (n − √(4klr + (k−l)²)) / (2k²(r − 1))` for `r = MN/B² ≠ 1`,
/// `b = (1 − ka)/l`, `c = (1 − kb)/l`, and `1/n` everywhere when `r = 1`.
pub fn limit_mbn(p: &MbnParams, precision: u32) -> Result<FamilyLimit> {
    mbn_limit(FamilyTag::Mbn, p, precision)
}

fn mbn_family(tag: FamilyTag, k: &BigRational, precision: u32) -> Result<FamilyLimit> {
    check_k(k)?;
    let spec = super::FamilySpec::family(tag, k.clone())?;
    mbn_limit(tag, &spec.as_mbn().expect("block family"), precision)
}

/// `A2`: `MBN` with `M = K`, `B = N = 1`.
pub fn limit_a2(k: &BigRational, precision: u32) -> Result<FamilyLimit> {
    mbn_family(FamilyTag::A2, k, precision)
}

/// `A3`: `MBN` with `M = B = 1`, `N = K`; same limit as `A2`.
pub fn limit_a3(k: &BigRational, precision: u32) -> Result<FamilyLimit> {
    mbn_family(FamilyTag::A3, k, precision)
}

/// `A4`: `MBN` with `M = N = 1`, `B = K`, so `MN/B² = 1/K²`.
pub fn limit_a4(k: &BigRational, precision: u32) -> Result<FamilyLimit> {
    mbn_family(FamilyTag::A4, k, precision)
}

/// Bordered pair `[[a,b,c],[b,a,c],[c,c,d]]` with
/// `b = (2K+1 − √(4K+5))/(2(K²−1))`, `a = Kb`, `d = (K+2 − √(4K+5))/(K−1)`
/// and `c = √(bd)`.
pub fn limit_a5(k: &BigRational, precision: u32) -> Result<FamilyLimit> {
    check_k(k)?;
    let root = QuadraticSurd::sqrt_of(&(q(4) * k + q(5)))?;
    let one = BigRational::one();
    let b = &(&QuadraticSurd::from_rational(q(2) * k + &one) - &root) / &(q(2) * (k * k - &one));
    let a = &b * k;
    let d = &(&QuadraticSurd::from_rational(k + q(2)) - &root) / &(k - &one);
    let bd = &b * &d;
    let c = sqrt_scalar(bd.clone().into());
    let mut limit = FamilyLimit::assemble(
        FamilyTag::A5,
        Shape::BorderedPair,
        vec![
            LimitEntry::exact("a", a.clone().into(), precision),
            LimitEntry::exact("b", b.clone().into(), precision),
            LimitEntry::exact("c", c, precision),
            LimitEntry::exact("d", d.clone().into(), precision),
        ],
        vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 3]],
        vec![
            LimitEntry::exact("x", sqrt_scalar(b.clone().into()), precision),
            LimitEntry::exact("z", sqrt_scalar(d.clone().into()), precision),
        ],
        vec![0, 0, 1],
    );
    // c is the positive root of c² = bd; the rows sum to one exactly iff
    // that root is 1 − a − b and 2c + d = 1
    let c_row = &QuadraticSurd::from_rational(one.clone()) - &(&a + &b);
    let two_c_d = &(&c_row * &q(2)) + &d;
    if c_row.is_positive() && &c_row * &c_row == bd && two_c_d.to_rational() == Some(one) {
        limit.check = StochasticCheck::Exact;
    }
    Ok(limit)
}

/// Circulant `[[a,b,c],[b,c,a],[c,a,b]]` in ℚ(t), `t = K^(1/3)`:
/// `a = (t² − t)/(K−1)`, `b = (K − t²)/(K−1)`, `c = (t − 1)/(K−1)`.
pub fn limit_a6(k: &BigRational, precision: u32) -> Result<FamilyLimit> {
    check_k(k)?;
    let t = CubicFieldElement::generator(k.clone())?;
    let constant = |c: BigRational| CubicFieldElement::from_rational(c, k.clone()).expect("K > 0");
    let t2 = &t * &t;
    let inv = (k - BigRational::one()).recip();
    let a = (&t2 - &t).scale(&inv);
    let b = (&constant(k.clone()) - &t2).scale(&inv);
    let c = (&t - &constant(BigRational::one())).scale(&inv);
    // X = diag(x, y, z) with x² = a/K, y² = c, z² = b
    let x = sqrt_scalar(a.scale(&k.recip()).into());
    let y = sqrt_scalar(c.clone().into());
    let z = sqrt_scalar(b.clone().into());
    Ok(FamilyLimit::assemble(
        FamilyTag::A6,
        Shape::Circulant,
        vec![
            LimitEntry::exact("a", a.into(), precision),
            LimitEntry::exact("b", b.into(), precision),
            LimitEntry::exact("c", c.into(), precision),
        ],
        vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        vec![
            LimitEntry::exact("x", x, precision),
            LimitEntry::exact("y", y, precision),
            LimitEntry::exact("z", z, precision),
        ],
        vec![0, 1, 2],
    ))
}
