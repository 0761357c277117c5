use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rows do not span a full-rank lattice")]
    RankDeficient,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("integer overflow during exact arithmetic")]
    Overflow,
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("empty input")]
    EmptyInput,
    #[error("multiplier must be nonzero")]
    ZeroMultiplier,
    #[error("power substitution by zero")]
    ZeroPower,
    #[error("{0} is not an odd prime")]
    NotPrime(i64),
    #[error("homomorphism is not surjective (image of size {image} in group of order {order})")]
    NotSurjective { image: u64, order: u64 },
    #[error("density mismatch: {centers} centers x tile size {tile} != lattice index {det}")]
    DensityMismatch { centers: usize, tile: usize, det: u64 },
    #[error("tile size {tile} does not divide torus size {det}")]
    DensityImpossible { tile: usize, det: u64 },
    #[error("tiling is not a valid exact cover")]
    InvalidTiling,
    #[error("multiplier {a} is not coprime to the tile size {size}")]
    InvalidMultiplier { a: i64, size: usize },
    #[error("word {0} is not a center of the tiling")]
    InvalidCenter(String),
    #[error("{0}")]
    WrongTile(String),
    #[error("census formula produced a non-integral value for p={p}, k={k}")]
    NonIntegral { p: u64, k: u64 },
    #[error("invalid type specification: {0}")]
    InvalidType(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
