//! `A7 = [[K,K,1],[K,1,1],[1,1,K]]` has no radical closed form. With
//! `S = diag(x,y,z)·A7·diag(x,y,z)` the stochasticity constraints reduce to
//! an even octic in `y`; `x` and `z` follow rationally.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{FamilyLimit, FamilyTag, LimitEntry, Shape};
use crate::error::{Error, Result};
use crate::numerics::rational::pow10;
use crate::numerics::RationalInterval;
use crate::roots::{isolate_even_roots_in, refine_to_width, Polynomial};

/// `(K−1)³y⁸ + 3(K−1)²y⁶ − (K−1)(2K−3)y⁴ − (4K−1)y² + K`.
pub fn a7_octic(k: &BigRational) -> Polynomial {
    let one = BigRational::one();
    let int = |n: i64| BigRational::from_integer(BigInt::from(n));
    let u = k - &one;
    let zero = BigRational::zero;
    Polynomial::new(vec![
        k.clone(),
        zero(),
        -(int(4) * k - &one),
        zero(),
        -(&u * (int(2) * k - int(3))),
        zero(),
        int(3) * &u * &u,
        zero(),
        &u * &u * &u,
    ])
}

/// One root `y ∈ (0, 1)` of the octic and the matrix it induces.
#[derive(Debug, Clone)]
pub struct A7Candidate {
    pub enclosure: RationalInterval,
    pub x: BigRational,
    pub y: BigRational,
    pub z: BigRational,
    /// `x, y, z > 0`, certified by the enclosure.
    pub positive: bool,
    /// `a, b, c, d, e, f` as in `[[a,b,c],[b,d,e],[c,e,f]]`.
    pub entries: [BigRational; 6],
}

/// `1 − 2y² − (K−1)y⁴`, the numerator of `z·y·((K−1)y² + 1)`.
fn z_numerator(k: &BigRational) -> Polynomial {
    let one = BigRational::one();
    Polynomial::new(vec![
        one.clone(),
        BigRational::zero(),
        BigRational::from_integer(BigInt::from(-2)),
        BigRational::zero(),
        -(k - &one),
    ])
}

fn round_to(v: &BigRational, digits: u32) -> BigRational {
    let scale = BigRational::from_integer(pow10(digits));
    (v * &scale).round() / scale
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

/// Every root of the octic in `(0, 1)`, refined below `10^-(precision+10)`,
/// with `x, y, z` and the six entries rounded to `precision + 5` digits.
pub fn a7_candidates(k: &BigRational, precision: u32) -> Result<Vec<A7Candidate>> {
    check_k(k)?;
    let octic = a7_octic(k);
    let g = z_numerator(k);
    let unit = RationalInterval::new(BigRational::zero(), BigRational::one())?;
    let digits = precision + 5;
    let mut width = BigRational::new(BigInt::one(), pow10(precision + 10));
    let mut out = Vec::new();
    for iv in isolate_even_roots_in(&octic, &unit)? {
        let mut iv = refine_to_width(&octic, &iv, &width)?;
        // the sign of z is that of g, once g has no root in the enclosure
        let mut z_sign = Ordering::Equal;
        for _ in 0..64 {
            let (s_lo, s_hi) = (g.sign_at(iv.lo()), g.sign_at(iv.hi()));
            if s_lo == s_hi && s_lo != Ordering::Equal {
                z_sign = s_lo;
                break;
            }
            width /= BigRational::from_integer(BigInt::from(1u64 << 20));
            iv = refine_to_width(&octic, &iv, &width)?;
        }
        let y = iv.midpoint();
        let den = (k - BigRational::one()) * &y * &y + BigRational::one();
        let x = &y / &den;
        let z = g.eval(&y) / (&y * &den);
        let entries = [
            k * &x * &x,
            k * &x * &y,
            &x * &z,
            &y * &y,
            &y * &z,
            k * &z * &z,
        ]
        .map(|v| round_to(&v, digits));
        out.push(A7Candidate {
            positive: iv.lo().is_positive() && z_sign == Ordering::Greater,
            x: round_to(&x, digits),
            y: round_to(&y, digits),
            z: round_to(&z, digits),
            enclosure: iv,
            entries,
        });
    }
    Ok(out)
}

/// The unique candidate with positive scaling.
pub fn limit_a7(k: &BigRational, precision: u32) -> Result<FamilyLimit> {
    let mut positive: Vec<A7Candidate> = a7_candidates(k, precision)?.into_iter().filter(|c| c.positive).collect();
    let c = match positive.len() {
        0 => return Err(Error::NoPositiveTriple),
        1 => positive.pop().expect("one candidate"),
        n => return Err(Error::AmbiguousTriple(n)),
    };
    let names = ["a", "b", "c", "d", "e", "f"];
    let entries = names.iter().zip(&c.entries).map(|(n, v)| LimitEntry::approximate(n, v.clone())).collect();
    let scaling = vec![
        LimitEntry::approximate("x", c.x),
        LimitEntry::approximate("y", c.y),
        LimitEntry::approximate("z", c.z),
    ];
    let mut limit = FamilyLimit::assemble(
        FamilyTag::A7,
        Shape::FullSymmetric,
        entries,
        vec![vec![0, 1, 2], vec![1, 3, 4], vec![2, 4, 5]],
        scaling,
        vec![0, 1, 2],
    );
    limit.root = Some((a7_octic(k), c.enclosure));
    Ok(limit)
}
