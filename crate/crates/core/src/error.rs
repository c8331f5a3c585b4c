use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank must be positive (got n = 0)")]
    ZeroRank,

    #[error("rank n = {n} is too small for this operation (need n >= {min})")]
    RankTooSmall { n: usize, min: usize },

    #[error("sequence has an odd number of minuses ({minuses})")]
    OddMinusCount { minuses: usize },

    #[error("invalid character {found:?} at position {position} (expected '+' or '-')")]
    InvalidSign { position: usize, found: char },

    #[error("expected a sequence of length {expected}, got length {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("rank n = {n} is too large for this operation (need n <= {max})")]
    RankTooLarge { n: usize, max: usize },

    #[error("generator index {index} out of range for n = {n}")]
    GeneratorOutOfRange { index: usize, n: usize },

    #[error("invalid reduced word at letter {position}: {reason}")]
    InvalidWord { position: usize, reason: String },

    #[error("boundary size mismatch: {left} top points against {right} bottom points")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("cannot evaluate a Laurent polynomial at zero")]
    EvalAtZero,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
