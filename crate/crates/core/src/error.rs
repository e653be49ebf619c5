use thiserror::Error;

use crate::exactpoly::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid interval: lo = {lo} exceeds hi = {hi}")]
    InvalidInterval { lo: Box<Rational>, hi: Box<Rational> },

    #[error("not positive at base point: polynomial #{index} has value {value} at 0")]
    NotPositiveAtBase { index: usize, value: Rational },

    #[error("residue not positive: value at base point is {0}")]
    ResidueNotPositive(Rational),

    #[error("not strictly convex at base point: f''(0) = {0}")]
    NotStrictlyConvex(Rational),

    #[error("not convex at base point: {0}")]
    NotConvex(String),

    #[error("radius certification failed: {0}")]
    RadiusRefuted(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown {kind} {name:?}; available: {available}")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
