use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate node set")]
    DegenerateNodes,
    #[error("empty node set")]
    EmptyNodeSet,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inconsistent interpolation data for {0}")]
    InconsistentInterpolation(String),
    #[error("coefficient undefined below threshold: N = {n} <= |I| = {size}")]
    BelowThreshold { n: i64, size: u32 },
    #[error("word grammar violation: {0}")]
    WordGrammar(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(String, String),
    #[error("expression still depends on the spectral parameter")]
    NotLambdaFree,
    #[error("universality input incomplete: no formula for Q_{0}")]
    UniversalityIncomplete(u32),
    #[error("dimension too small for interpolation: {0}")]
    CoincidentNodes(String),
    #[error("degenerate normalization")]
    DegenerateNormalization,
    #[error("critical channel does not vanish: {0}")]
    CriticalChannel(String),
    #[error("malformed formula: {0}")]
    MalformedFormula(String),
    #[error("degenerate scale")]
    DegenerateScale,
}

pub type Result<T> = std::result::Result<T, Error>;
