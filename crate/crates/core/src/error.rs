use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("n must be odd > 1 (got n = {0})")]
    EvenModulus(u64),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("{value} is not a unit modulo {modulus}")]
    NotUnit { value: u64, modulus: u64 },

    #[error("residue {value} out of range for modulus {modulus}")]
    ResidueOutOfRange { value: u64, modulus: u64 },

    #[error("subset must not contain 0")]
    ZeroInSubset,

    #[error("subsets are limited to moduli up to {max}, got {n}")]
    SubsetTooWide { n: u64, max: u64 },

    #[error("argument must be positive")]
    ZeroArgument,

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("order {n} exceeds the configured bound {bound}")]
    AboveBound { n: u64, bound: u64 },

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("not a right loop: {0}")]
    NotRightLoop(String),

    #[error("{0} is not left nonsingular")]
    NotLeftNonsingular(usize),

    #[error("unknown class id {0}")]
    UnknownClass(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}
