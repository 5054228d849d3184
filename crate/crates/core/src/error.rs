use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// The CLI maps each variant onto a stable exit code, see [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must be symmetric")]
    NotSymmetric,
    #[error("entry ({row}, {col}) is not strictly positive")]
    NonPositive { row: usize, col: usize },
    #[error("matrix is not doubly stochastic within tolerance")]
    NotDoublyStochastic,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("negative radicand")]
    NegativeRadicand,
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("enclosure does not isolate a root")]
    NonIsolating,
    #[error("K = 1 is degenerate: the family collapses to the uniform matrix")]
    DegenerateK,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no root of the octic yields a positive scaling triple")]
    NoPositiveTriple,
    #[error("{0} roots of the octic yield positive scaling triples")]
    AmbiguousTriple(usize),
    #[error("matrix is not two-valued")]
    NotTwoValued,
    #[error("matrix matches none of the seven two-valued classes")]
    NoClass,
    #[error("root is rational, continued fraction terminates: {0:?}")]
    RationalRoot(Vec<num_bigint::BigInt>),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonPositive { .. } => 3,
            Error::DegenerateK => 4,
            Error::NotTwoValued | Error::NotSymmetric | Error::NoClass => 5,
            Error::AmbiguousTriple(_) | Error::NoPositiveTriple => 6,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
