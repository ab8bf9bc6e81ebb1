use thiserror::Error;

/// Errors surfaced by the library. Most operations are total; the variants
/// here cover caps, malformed input and hypothesis failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("submodule is not a summand of the ambient module")]
    NotSplit,
    #[error("cap exceeded: {what} ({value} > {cap})")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("simplex is not in the complex: {0:?}")]
    NotASimplex(Vec<u32>),
    #[error("subcomplex is not contained in the ambient complex")]
    NotASubcomplex,
    #[error("Morse hypothesis ({which}) violated by {first:?} and {second:?}")]
    HypothesisViolated { which: &'static str, first: Vec<u32>, second: Vec<u32> },
    #[error("torsion detected where a free group was required: {0}")]
    TorsionDetected(String),
    #[error("element is not a cycle or not in the lattice: {0}")]
    NotInLattice(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
