//! Closed-form Sinkhorn limits of the two-valued symmetric 3×3 families
//! `A1`–`A7` and of the block matrix `MBN`.
//!
//! Every limit is symmetric, `S(A) = X·A·X`, so alongside the entries each
//! [`FamilyLimit`] carries the diagonal of `X`.

mod a7;
mod asymptotic;
mod closed;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numerics::rational::{format_rational, to_f64};
use crate::numerics::{to_decimal, AlgebraicScalar, QuadraticSurd, RationalInterval, Rounding};
use crate::roots::Polynomial;

pub use a7::{a7_candidates, a7_octic, limit_a7, A7Candidate};
pub use asymptotic::{a2_rationality, asymptotic_limit, A2Rationality, Direction};
pub use closed::{limit_a1, limit_a2, limit_a3, limit_a4, limit_a5, limit_a6, limit_mbn};

/// Decimal digits used to evaluate entries unless a caller asks otherwise.
pub const DEFAULT_PRECISION: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    Mbn,
}

impl FamilyTag {
    /// The seven two-valued classes, in canonical order.
    pub const CLASSES: [FamilyTag; 7] =
        [FamilyTag::A1, FamilyTag::A2, FamilyTag::A3, FamilyTag::A4, FamilyTag::A5, FamilyTag::A6, FamilyTag::A7];

    pub fn shape(self) -> Shape {
        match self {
            FamilyTag::A1 | FamilyTag::A6 => Shape::Circulant,
            FamilyTag::A2 | FamilyTag::A3 | FamilyTag::A4 | FamilyTag::Mbn => Shape::Block,
            FamilyTag::A5 => Shape::BorderedPair,
            FamilyTag::A7 => Shape::FullSymmetric,
        }
    }

    /// Positions of `K` in the canonical 3×3 matrix; all other entries are 1.
    pub fn k_pattern(self) -> Option<[[bool; 3]; 3]> {
        const T: bool = true;
        const F: bool = false;
        Some(match self {
            FamilyTag::A1 => [[T, F, F], [F, T, F], [F, F, T]],
            FamilyTag::A2 => [[T, F, F], [F, F, F], [F, F, F]],
            FamilyTag::A3 => [[F, F, F], [F, T, T], [F, T, T]],
            FamilyTag::A4 => [[F, T, T], [T, F, F], [T, F, F]],
            FamilyTag::A5 => [[T, F, F], [F, T, F], [F, F, F]],
            FamilyTag::A6 => [[T, T, F], [T, F, F], [F, F, F]],
            FamilyTag::A7 => [[T, T, F], [T, F, F], [F, F, T]],
            FamilyTag::Mbn => return None,
        })
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::A1 => "A1",
            FamilyTag::A2 => "A2",
            FamilyTag::A3 => "A3",
            FamilyTag::A4 => "A4",
            FamilyTag::A5 => "A5",
            FamilyTag::A6 => "A6",
            FamilyTag::A7 => "A7",
            FamilyTag::Mbn => "MBN",
        })
    }
}

impl FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A1" => FamilyTag::A1,
            "A2" => FamilyTag::A2,
            "A3" => FamilyTag::A3,
            "A4" => FamilyTag::A4,
            "A5" => FamilyTag::A5,
            "A6" => FamilyTag::A6,
            "A7" => FamilyTag::A7,
            "MBN" => FamilyTag::Mbn,
            other => return Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        })
    }
}

/// Parameters of the block matrix with `k` rows `(M…M B…B)` followed by `l`
/// rows `(B…B N…N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MbnParams {
    pub k: usize,
    pub l: usize,
    pub m: BigRational,
    pub b: BigRational,
    pub n: BigRational,
}

impl MbnParams {
    pub fn new(k: usize, l: usize, m: BigRational, b: BigRational, n: BigRational) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidParameter("block sizes k and l must be at least 1".into()));
        }
        if !(m.is_positive() && b.is_positive() && n.is_positive()) {
            return Err(Error::InvalidParameter("M, B and N must be positive".into()));
        }
        Ok(Self { k, l, m, b, n })
    }

    pub fn size(&self) -> usize {
        self.k + self.l
    }

    /// `MN/B²`, the only quantity the limit depends on.
    pub fn ratio(&self) -> BigRational {
        &self.m * &self.n / (&self.b * &self.b)
    }

    pub fn matrix(&self) -> Matrix<BigRational> {
        let k = self.k;
        Matrix::from_fn(self.size(), self.size(), |i, j| match (i < k, j < k) {
            (true, true) => self.m.clone(),
            (false, false) => self.n.clone(),
            _ => self.b.clone(),
        })
    }
}

/// A family and its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub tag: FamilyTag,
    /// `K` for `A1`–`A7`; unused for `MBN`.
    pub k: BigRational,
    pub mbn: Option<MbnParams>,
}

impl FamilySpec {
    /// One of `A1`–`A7` with parameter `K > 0`. `K = 1` is accepted here and
    /// rejected by [`limit`](Self::limit).
    pub fn family(tag: FamilyTag, k: BigRational) -> Result<Self> {
        if tag == FamilyTag::Mbn {
            return Err(Error::InvalidParameter("MBN takes k, l, M, B, N".into()));
        }
        if !k.is_positive() {
            return Err(Error::InvalidParameter("K must be positive".into()));
        }
        Ok(Self { tag, k, mbn: None })
    }

    pub fn mbn(params: MbnParams) -> Self {
        Self { tag: FamilyTag::Mbn, k: BigRational::one(), mbn: Some(params) }
    }

    /// The block description of `A2`, `A3`, `A4`.
    pub fn as_mbn(&self) -> Option<MbnParams> {
        let one = BigRational::one;
        let k = self.k.clone();
        match self.tag {
            FamilyTag::Mbn => self.mbn.clone(),
            FamilyTag::A2 => Some(MbnParams { k: 1, l: 2, m: k, b: one(), n: one() }),
            FamilyTag::A3 => Some(MbnParams { k: 1, l: 2, m: one(), b: one(), n: k }),
            FamilyTag::A4 => Some(MbnParams { k: 1, l: 2, m: one(), b: k, n: one() }),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        self.mbn.as_ref().map_or(3, MbnParams::size)
    }

    /// The matrix whose limit this spec describes.
    pub fn matrix(&self) -> Matrix<BigRational> {
        if let Some(p) = &self.mbn {
            return p.matrix();
        }
        let pattern = self.tag.k_pattern().expect("3x3 family");
        Matrix::from_fn(3, 3, |i, j| if pattern[i][j] { self.k.clone() } else { BigRational::one() })
    }

    pub fn is_degenerate(&self) -> bool {
        self.tag != FamilyTag::Mbn && self.k.is_one()
    }

    /// Closed-form limit. `K = 1` is [`Error::DegenerateK`].
    pub fn limit(&self, precision: u32) -> Result<FamilyLimit> {
        if self.is_degenerate() {
            return Err(Error::DegenerateK);
        }
        match self.tag {
            FamilyTag::A1 => limit_a1(&self.k, precision),
            FamilyTag::A2 => limit_a2(&self.k, precision),
            FamilyTag::A3 => limit_a3(&self.k, precision),
            FamilyTag::A4 => limit_a4(&self.k, precision),
            FamilyTag::A5 => limit_a5(&self.k, precision),
            FamilyTag::A6 => limit_a6(&self.k, precision),
            FamilyTag::A7 => limit_a7(&self.k, precision),
            FamilyTag::Mbn => limit_mbn(self.mbn.as_ref().expect("MBN parameters"), precision),
        }
    }

    /// As [`limit`](Self::limit), but `K = 1` yields the uniform matrix with
    /// [`FamilyLimit::degenerate`] set.
    pub fn limit_allowing_degenerate(&self, precision: u32) -> Result<FamilyLimit> {
        if self.is_degenerate() {
            Ok(FamilyLimit::uniform(self.tag, self.size(), precision))
        } else {
            self.limit(precision)
        }
    }
}

/// The four limit patterns of the 3×3 families; `Block` covers `MBN` of any
/// size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Block,
    BorderedPair,
    Circulant,
    FullSymmetric,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Block => "block",
            Shape::BorderedPair => "bordered-pair",
            Shape::Circulant => "circulant",
            Shape::FullSymmetric => "full-symmetric",
        })
    }
}

/// A named value: exact when a closed form exists, always with a rational
/// approximation and a float.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitEntry {
    pub name: String,
    pub exact: Option<AlgebraicScalar>,
    /// Within `10^(-precision)` of the true value.
    pub value: BigRational,
    pub numeric: f64,
}

impl LimitEntry {
    pub fn exact(name: &str, exact: AlgebraicScalar, precision: u32) -> Self {
        let value = exact.eval(precision);
        Self { name: name.into(), numeric: to_f64(&value), value, exact: Some(exact) }
    }

    pub fn approximate(name: &str, value: BigRational) -> Self {
        Self { name: name.into(), numeric: to_f64(&value), value, exact: None }
    }

    pub fn to_json(&self, places: u32, rounding: Rounding) -> Value {
        json!({
            "exact": self.exact.as_ref().map(ToString::to_string),
            "numeric": to_decimal(&self.value, places, rounding),
        })
    }
}

/// How double stochasticity of a limit was established.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StochasticCheck {
    /// Row sums reduce to one in exact field arithmetic.
    Exact,
    /// Largest deviation of a row sum computed from the rational values.
    Numeric(f64),
}

#[derive(Debug, Clone)]
pub struct FamilyLimit {
    pub tag: FamilyTag,
    pub shape: Shape,
    pub entries: Vec<LimitEntry>,
    /// Index into `entries` for each matrix position.
    pub pattern: Vec<Vec<usize>>,
    /// Distinct diagonal values of `X`.
    pub scaling: Vec<LimitEntry>,
    /// Index into `scaling` for each diagonal position.
    pub scaling_pattern: Vec<usize>,
    pub matrix: Matrix<f64>,
    pub check: StochasticCheck,
    /// Set when `K = 1` was replaced by the uniform matrix.
    pub degenerate: bool,
    /// Defining polynomial and isolating enclosure when no closed form exists.
    pub root: Option<(Polynomial, RationalInterval)>,
}

impl FamilyLimit {
    pub(crate) fn assemble(
        tag: FamilyTag,
        shape: Shape,
        entries: Vec<LimitEntry>,
        pattern: Vec<Vec<usize>>,
        scaling: Vec<LimitEntry>,
        scaling_pattern: Vec<usize>,
    ) -> Self {
        let n = pattern.len();
        let matrix = Matrix::from_fn(n, n, |i, j| entries[pattern[i][j]].numeric);
        let mut out = Self {
            tag,
            shape,
            entries,
            pattern,
            scaling,
            scaling_pattern,
            matrix,
            check: StochasticCheck::Exact,
            degenerate: false,
            root: None,
        };
        if out.exact_row_sums().is_none() {
            out.check = StochasticCheck::Numeric(out.numeric_deviation());
        }
        out
    }

    fn uniform(tag: FamilyTag, n: usize, precision: u32) -> Self {
        let v = AlgebraicScalar::Rational(BigRational::new(1.into(), n.into()));
        // X = diag(1/√n) scales the all-ones matrix
        let x = QuadraticSurd::sqrt_of(&BigRational::new(1.into(), n.into())).expect("positive");
        let mut out = Self::assemble(
            tag,
            tag.shape(),
            vec![LimitEntry::exact("a", v, precision)],
            vec![vec![0; n]; n],
            vec![LimitEntry::exact("x", x.into(), precision)],
            vec![0; n],
        );
        out.degenerate = true;
        out
    }

    pub fn size(&self) -> usize {
        self.pattern.len()
    }

    pub fn entry(&self, name: &str) -> Option<&LimitEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn scaling_value(&self, name: &str) -> Option<&LimitEntry> {
        self.scaling.iter().find(|e| e.name == name)
    }

    /// Diagonal of `X`, as floats.
    pub fn scaling_vector(&self) -> Vec<f64> {
        self.scaling_pattern.iter().map(|&i| self.scaling[i].numeric).collect()
    }

    /// The limit with each entry replaced by its rational approximation.
    pub fn value_matrix(&self) -> Matrix<BigRational> {
        let n = self.size();
        Matrix::from_fn(n, n, |i, j| self.entries[self.pattern[i][j]].value.clone())
    }

    /// Row sums in exact arithmetic, when every entry of each row lies in
    /// one common field. `Some` only if all equal one.
    fn exact_row_sums(&self) -> Option<()> {
        for row in &self.pattern {
            let mut sum = AlgebraicScalar::Rational(BigRational::zero());
            for &i in row {
                sum = sum.checked_add(self.entries[i].exact.as_ref()?)?;
            }
            if sum.equals_rational(&BigRational::one()) != Some(true) {
                return None;
            }
        }
        Some(())
    }

    fn numeric_deviation(&self) -> f64 {
        let m = self.value_matrix();
        m.row_sums()
            .into_iter()
            .chain(m.col_sums())
            .map(|s| to_f64(&(s - BigRational::one()).abs()))
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self, places: u32, rounding: Rounding) -> Value {
        let mut entries = Map::new();
        for e in &self.entries {
            entries.insert(e.name.clone(), e.to_json(places, rounding));
        }
        let mut scaling = Map::new();
        for e in &self.scaling {
            scaling.insert(e.name.clone(), e.to_json(places, rounding));
        }
        let matrix: Vec<Vec<String>> = self
            .value_matrix()
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|v| to_decimal(v, places, rounding)).collect())
            .collect();
        let mut out = json!({
            "family": self.tag.to_string(),
            "shape": self.shape.to_string(),
            "entries": entries,
            "scaling": scaling,
            "scaling_vector": self.scaling_pattern.iter().map(|&i| self.scaling[i].name.clone()).collect::<Vec<_>>(),
            "matrix": matrix,
            "degenerate": self.degenerate,
            "stochastic_check": match self.check {
                StochasticCheck::Exact => json!("exact"),
                StochasticCheck::Numeric(d) => json!({ "numeric_deviation": d }),
            },
        });
        if let Some((p, iv)) = &self.root {
            out["root"] = json!({
                "polynomial": p.display_in("y"),
                "enclosure": [format_rational(iv.lo()), format_rational(iv.hi())],
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    #[test]
    fn tags_round_trip() {
        for tag in FamilyTag::CLASSES.into_iter().chain([FamilyTag::Mbn]) {
            assert_eq!(tag.to_string().parse::<FamilyTag>().unwrap(), tag);
        }
        assert_eq!("mbn".parse::<FamilyTag>().unwrap(), FamilyTag::Mbn);
        assert!("A8".parse::<FamilyTag>().is_err());
    }

    #[test]
    fn family_matrices() {
        let a6 = FamilySpec::family(FamilyTag::A6, int(2)).unwrap().matrix();
        assert_eq!(a6.row(0), &[int(2), int(2), int(1)]);
        assert_eq!(a6.row(2), &[int(1), int(1), int(1)]);
        let a7 = FamilySpec::family(FamilyTag::A7, int(2)).unwrap().matrix();
        assert_eq!(*a7.get(2, 2), int(2));
        let mbn = MbnParams::new(2, 1, int(2), int(5), int(3)).unwrap();
        assert_eq!(mbn.matrix().row(0), &[int(2), int(2), int(5)]);
        assert_eq!(mbn.ratio(), rat(6, 25));
        for tag in [FamilyTag::A2, FamilyTag::A3, FamilyTag::A4] {
            let spec = FamilySpec::family(tag, int(3)).unwrap();
            assert_eq!(spec.as_mbn().unwrap().matrix(), spec.matrix());
        }
    }

    #[test]
    fn degenerate_k() {
        let spec = FamilySpec::family(FamilyTag::A5, int(1)).unwrap();
        assert!(matches!(spec.limit(10), Err(Error::DegenerateK)));
        let lim = spec.limit_allowing_degenerate(10).unwrap();
        assert!(lim.degenerate);
        assert_eq!(lim.value_matrix(), Matrix::uniform(3));
        assert_eq!(lim.check, StochasticCheck::Exact);
        assert!(FamilySpec::family(FamilyTag::A1, int(0)).is_err());
    }
}
