use crate::Int;

/// Errors reported by the library. Most operations are total on valid
/// domain values; errors are concentrated at construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid Seifert fibre ({p},{x}): {reason}")]
    InvalidFibre {
        p: Int,
        x: Int,
        reason: &'static str,
    },

    #[error("a Seifert form needs at least three fibres, got {0}")]
    TooFewFibres(usize),

    #[error("expected three exceptional fibres after canonicalization, found {0}")]
    NotSmall(usize),

    #[error("fibre index {index} out of range for a form with {count} fibres")]
    FibreIndex { index: usize, count: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("L({p},{q}) is not a lens space: p and q must be coprime")]
    NotCoprime { p: Int, q: Int },

    #[error("multiplicity constraint violated: {0}")]
    InvalidMultiplicity(String),

    #[error("q = {q} is not an inverse of the torque {x} modulo {p}")]
    TwistInverse { p: Int, x: Int, q: Int },

    #[error("twist produces a fibre of multiplicity {0} <= 0")]
    TwistMultiplicity(Int),

    #[error("no linking solution for the requested fibre, sign and linking number")]
    UnsolvableLinking,

    #[error("d-invariant vectors have different sizes: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("value out of supported range: {0}")]
    OutOfRange(String),

    #[error("p = {0} does not satisfy p >= 2 and p = 3 (mod 17)")]
    Prop4Input(Int),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
