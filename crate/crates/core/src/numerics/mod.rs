//! Exact scalar arithmetic: big rationals, quadratic surds, cubic-field
//! elements and rational interval refinement.
//!
//! Text forms are part of the CLI contract: rationals print as `p/q` (or `p`),
//! surds as `(P + Q*sqrt(D))/R`.

pub mod algebraic;
pub mod cubic;
pub mod floor;
pub mod interval;
pub mod rational;
pub mod surd;

pub use algebraic::AlgebraicScalar;
pub use cubic::CubicFieldElement;
pub use floor::algebraic_floor;
pub use interval::{RationalInterval, RootEnclosure};
pub use num_rational::BigRational;
pub use rational::{format_rational, parse_rational, to_decimal, Rounding};
pub use surd::QuadraticSurd;

/// Numeric value of a surd, within `10^(-precision)`.
pub fn surd_eval(s: &QuadraticSurd, precision: u32) -> BigRational {
    s.eval(precision)
}

/// Numeric value of a cubic-field element, within `10^(-precision)`.
pub fn cubic_eval(c: &CubicFieldElement, precision: u32) -> BigRational {
    c.eval(precision)
}
