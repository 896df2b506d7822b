use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,
    #[error("even length required (got {0})")]
    EvenLengthRequired(usize),
    #[error("evaluation outside domain")]
    OutsideDomain,
    #[error("grid not BMC-compatible")]
    GridNotBmcCompatible,
    #[error("zero pivot")]
    ZeroPivot,
    #[error("function returned non-finite value")]
    NonFinite,
    #[error("rank overflow: function may be non-smooth")]
    RankOverflow,
    #[error("function not resolved on a {m}x{n} grid; increase the resolution")]
    Unresolved { m: usize, n: usize },
    #[error("not divisible by rho")]
    NotDivisibleByRho,
    #[error("cannot differentiate unstructured approximant")]
    Unstructured,
    #[error("operator size must be even and at least 4 (got {0})")]
    InvalidOperatorSize(usize),
    #[error("ADI intervals overlap; fall back to direct solver")]
    IntervalsOverlap,
    #[error("shift collision with spectrum")]
    ShiftCollision,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
