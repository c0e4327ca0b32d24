use thiserror::Error;

use crate::cluster::Violation;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("division by zero")]
    DivisionByZero,

    #[error("minimal polynomial {0} is not irreducible over its base field")]
    ReducibleModulus(String),

    #[error("minimal polynomial must have degree at least 2, got {0}")]
    DegenerateModulus(usize),

    #[error(
        "expansion needs an algebraic extension by a root of {poly} beyond the depth limit {limit}; \
         supply the branches combinatorially (--branches or --diagram) instead"
    )]
    ExtensionDepthExceeded { limit: usize, poly: String },

    #[error("malformed characteristic exponents {exponents:?}: {reason}")]
    MalformedExponents { exponents: Vec<u64>, reason: String },

    #[error("malformed multiplicity sequence: {0}")]
    MalformedSequence(String),

    #[error("shared point count {shared} out of range 1..={max}")]
    SharedOutOfRange { shared: usize, max: usize },

    #[error("inconsistent contacts: {0}")]
    InconsistentContacts(String),

    #[error("branches {first} and {second} cannot share {shared} points: {reason}")]
    IncompatibleContact {
        first: String,
        second: String,
        shared: usize,
        reason: String,
    },

    #[error("invalid diagram: {}", format_violations(.0))]
    InvalidDiagram(Vec<Violation>),

    #[error("{lambda} is not a candidate jumping number for E{divisor}")]
    NotCandidate { divisor: usize, lambda: String },

    #[error("{0} is not a jumping number")]
    NotJumping(String),

    #[error("no such exceptional divisor E{0}")]
    NoSuchDivisor(usize),

    #[error("the polynomial does not vanish at the origin")]
    UnitAtOrigin,

    #[error("the polynomial is degenerate with respect to its Newton polygon")]
    Degenerate,

    #[error("bound must lie in {0}")]
    BadBound(String),

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
