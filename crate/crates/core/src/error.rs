use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular over GF(2) (rank {rank} < {dim})")]
    SingularMatrix { rank: usize, dim: usize },

    #[error("matrix dimension {dim} exceeds the limit of {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("kernel size {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),

    #[error("kernel size {size} is not supported here (maximum {max})")]
    UnsupportedSize { size: usize, max: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("bit prefix too short: need {needed}, got {got}")]
    PrefixTooShort { needed: usize, got: usize },

    #[error("inconsistent phase-cost inputs: {0}")]
    InconsistentCost(String),

    #[error("candidate list is empty")]
    EmptyCandidates,

    #[error("permutation search exceeded the beam cap of {cap} partial candidates")]
    BeamOverflow { cap: usize },

    #[error("kernel processor is at phase {actual}, expected {expected}")]
    PhaseMismatch { expected: usize, actual: usize },

    #[error("no surviving path for the committed bit")]
    NoSurvivingPath,

    #[error("input vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("frozen bit {0} is set")]
    FrozenBitViolation(usize),

    #[error("invalid code parameters: {0}")]
    InvalidCode(String),

    #[error("invalid stop rule: {0}")]
    InvalidStopRule(String),

    #[error("{0}")]
    Parse(#[from] crate::format::ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
