use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty word is not allowed here")]
    EmptyWord,
    #[error("generator x{generator} exceeds rank {rank}")]
    RankExceeded { generator: u16, rank: u16 },
    #[error("expected {expected} words, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("tuple is not a basis")]
    NotABasis,
    #[error("word is not Whitehead-minimal")]
    NotMinimal,
    #[error("inputs commute")]
    CommutingInputs,
    #[error("{what} exceeded cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("slender blockers require rank >= 3")]
    SlenderRank,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
