use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: need a < b and both finite")]
    InvalidInterval { a: f64, b: f64 },

    #[error("rule degree must be at least 1, got {0}")]
    InvalidDegree(usize),

    #[error("subinterval count must be at least 1, got {0}")]
    InvalidPartition(usize),

    #[error("derivative order {m} exceeds polynomial degree {n}")]
    DerivativeOrder { m: usize, n: usize },

    #[error("exponent must lie in [1, inf], got {0}")]
    InvalidExponent(f64),

    #[error("norm {norm} is not compatible with the {family} family")]
    IncompatibleNorm { family: String, norm: String },

    #[error("unknown rule family `{0}` (expected l1, l2, linf or alex)")]
    UnknownFamily(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error: {op} undefined at x = {at}")]
    Domain { op: &'static str, at: f64 },

    #[error("{op} is not differentiable at x = {at}")]
    NonDifferentiable { op: &'static str, at: f64 },

    #[error("jet of order {have} supplied, rule needs order {needed}")]
    InsufficientJetOrder { needed: usize, have: usize },

    #[error("root finder did not converge: found {found} of {expected} roots")]
    RootsNotConverged { found: usize, expected: usize },

    #[error("extremal amplitude must be finite and nonzero, got {0}")]
    InvalidAmplitude(f64),

    #[error("relative tolerance {0} is below the supported minimum 1e-13")]
    InvalidTolerance(f64),

    #[error(
        "tolerance not reached after {evaluations} evaluations \
         (best value {value}, estimated error {est_abs_error})"
    )]
    ToleranceNotReached {
        value: f64,
        est_abs_error: f64,
        evaluations: usize,
    },
}
