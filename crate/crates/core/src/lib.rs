//! Sinkhorn alternate row/column scaling of positive matrices, exact
//! closed-form limits for the two-valued symmetric 3×3 families and the
//! block `MBN` family, and rational approximation of cube roots from exact
//! scaling iterates.

pub mod cli;
pub mod diophantine;
pub mod equivalence;
pub mod error;
pub mod families;
pub mod matrix;
pub mod numerics;
pub mod roots;
pub mod scaling;

pub use error::{Error, Result};
