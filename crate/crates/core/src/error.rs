use thiserror::Error;

use crate::plane::Obstruction;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("ring mismatch: cannot combine a {left} element with a {right} element")]
    RingMismatch { left: &'static str, right: &'static str },
    #[error("total degree is only defined on polynomial-ring elements")]
    LaurentTotalDegree,
    #[error("image of z{var} is not a unit monomial, so its negative power cannot be evaluated")]
    NonInvertibleImage { var: usize },
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: String },
    #[error("matrix must be square and non-empty")]
    NotSquare,
    #[error("exponent {0} does not fit in machine range")]
    ExponentOverflow(String),
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("negative exponent at position {pos} in a polynomial ring")]
    NegativeExponent { pos: usize },
    #[error("alpha entry {index} is zero")]
    ZeroScalar { index: usize },
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(Obstruction),
    #[error("tame decomposition exceeded the step cap of {cap} factors")]
    StepCapExceeded { cap: usize },
    #[error("elements belong to different GWA specs")]
    SpecMismatch,
    #[error("generator set must contain 1")]
    NotSubframe,
    #[error("subspace is not stable under the defining automorphism")]
    NotStable,
    #[error("defining element must be nonzero")]
    ZeroElement,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
