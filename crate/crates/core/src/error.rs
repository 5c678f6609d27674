use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty reference set")]
    EmptyReferenceSet,

    #[error("threshold must be at least 1")]
    ZeroThreshold,

    #[error("fraction {num}/{den} is outside the open interval (0, 1)")]
    FractionOutOfRange { num: u64, den: u64 },

    #[error("relative factor {num}/{den} is not an improvement (must be >= 1 with non-zero denominator)")]
    InvalidFactor { num: u64, den: u64 },

    #[error(
        "inexact relative improvement at index {index}: {count} * {num} is not divisible by {den}"
    )]
    InexactRelativeImprovement {
        index: usize,
        count: u64,
        num: u64,
        den: u64,
    },

    #[error("citation count overflow at index {index}")]
    Overflow { index: usize },

    #[error(
        "periods cover different papers: period {period} has {found} papers, expected {expected}"
    )]
    PeriodsCoverDifferentPapers {
        period: usize,
        expected: usize,
        found: usize,
    },

    #[error("a time-partitioned record needs at least 2 periods, got {0}")]
    TooFewPeriods(usize),

    #[error("period structures differ: {a} periods vs {b} periods")]
    PeriodStructuresDiffer { a: usize, b: usize },

    #[error("invalid search bounds: {0}")]
    InvalidBounds(String),

    #[error("scenario does not apply to this record shape: {0}")]
    ScenarioMismatch(String),

    #[error("cannot parse {0:?} as a fraction p/q")]
    BadFraction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
