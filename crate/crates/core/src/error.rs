use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid recurrence spec: {0}")]
    InvalidSpec(String),
    #[error("index {index} exceeds the index cap {cap}")]
    IndexCapExceeded { index: i64, cap: u32 },
    #[error(
        "backward step at index {index} is not exact: {numerator} is not divisible by r = {r}"
    )]
    BackwardNotExact {
        index: i64,
        numerator: String,
        r: i64,
    },
    #[error("empty window: lo {lo} > hi {hi}")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("degenerate denominator: p + q + r = 1")]
    DegenerateDenominator,
    #[error("{what} is not defined for the {family} family")]
    UnsupportedFamily { what: String, family: String },
    #[error("n must be at least 1")]
    ZeroOrder,
    #[error("generating row is empty")]
    EmptyRow,
    #[error("sequence index {0} is missing")]
    MissingIndex(i64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not square or is empty")]
    NotSquare,
    #[error("entries violate the {0} structure")]
    KindViolation(String),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("Hankel entry at sequence index {index} is negative")]
    NegativeEntries { index: i64 },
    #[error("malformed rational {0:?}")]
    ParseRational(String),
    #[error("unknown identifier {0:?}")]
    UnknownId(String),
    #[error("registered formula {0} has no records")]
    IncompleteCoverage(String),
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
