use thiserror::Error;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("zero coordinate at index {0}; Laurent monomials are undefined there")]
    ZeroCoordinate(usize),

    #[error("singular matrix")]
    Singular,

    #[error("not a dominant weight: {0:?}")]
    NotDominant(Vec<i64>),

    #[error("polynomial is not invariant under the hyperoctahedral group")]
    NotInvariant,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("pole of the operator coefficients: {0}")]
    Pole(String),

    #[error("interpolation failed after {attempts} sample draws")]
    Interpolation { attempts: usize },

    #[error("interpolated image disagrees with direct evaluation at a held-out point")]
    Consistency,

    #[error("eigenvalue collision between {lam:?} and {mu:?}")]
    Degenerate { lam: Vec<i64>, mu: Vec<i64> },

    #[error("degenerate quadrature point: truncated denominator vanishes")]
    DegeneratePoint,

    #[error("invalid quadrature configuration: {0}")]
    Quadrature(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
