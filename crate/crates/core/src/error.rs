use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2")]
    ModulusTooSmall,
    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: u64, found: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{d} does not divide {n}")]
    NotADivisor { n: u64, d: u64 },
    #[error("almost zero key requires n ≡ 4 (mod 8)")]
    NoAlmostZeroKey,
    #[error("factorization mismatch: {left} vs {right}")]
    FactorizationMismatch { left: u64, right: u64 },
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("invalid multiplier: {0}")]
    InvalidMultiplier(String),
    #[error("invalid connection set: {0}")]
    InvalidConnectionSet(String),
    #[error("key of the empty set is undefined")]
    EmptySet,
    #[error("mode mismatch: both sets must be digraph or both graph")]
    ModeMismatch,
    #[error("oracle cutoff exceeded: n = {n} > {cutoff}")]
    OracleCutoff { n: u64, cutoff: u64 },
    #[error("predicate stated only for m ≥ {min}")]
    PredicateRange { min: usize },
    #[error("valency {m} out of range 1..={max}")]
    ValencyRange { m: usize, max: usize },
    /// A mathematical invariant the engine relies on did not hold. Always a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
