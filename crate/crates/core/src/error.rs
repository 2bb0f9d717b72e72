use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("value {value} is not a canonical element of a field of order {order}")]
    NonCanonical { value: u64, order: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix does not have full row rank (rank {rank}, rows {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("block length {n} exceeds field order {q}")]
    TooLong { n: usize, q: u32 },

    #[error("evaluation points are not distinct")]
    DuplicatePoints,

    #[error("invalid code parameters: {0}")]
    InvalidParameters(String),

    #[error("{subsets} column subsets exceed the cap of {cap}")]
    TooManySubsets { subsets: u128, cap: u128 },

    #[error("list of size {size} exceeds the enumeration cap of {cap}")]
    ListTooLarge { size: String, cap: u128 },

    #[error("{size} source sequences exceed the enumeration cap of {cap}")]
    TooLarge { size: String, cap: u128 },

    #[error("epsilon {epsilon} outside [0, H(X)) with H(X) = {entropy}")]
    EpsilonOutOfRange { epsilon: f64, entropy: f64 },

    #[error("invalid source model: {0}")]
    InvalidSource(String),

    #[error("invalid subset query: {0}")]
    InvalidSubset(String),

    #[error("key length {got} does not match complement dimension {expected}")]
    KeyLengthMismatch { expected: usize, got: usize },

    #[error("overlap chaining needs at least two blocks, got {0}")]
    TooFewBlocks(usize),

    #[error("malformed container at byte {offset}: {message}")]
    Format { offset: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
