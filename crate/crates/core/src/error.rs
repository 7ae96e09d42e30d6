use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("amplitude is singular at p = {0}")]
    SingularPoint(f64),

    #[error("point {p} lies outside the interval [{lo}, {hi}]")]
    Domain { p: f64, lo: f64, hi: f64 },

    #[error("velocity {v} is outside the range ({lo}, {hi}) of f'")]
    Range { v: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("datum carries no decay majorant")]
    MissingMajorant,

    #[error("symbol carries no limit metadata for an infinite cone endpoint")]
    MissingMetadata,

    #[error("series constants need alpha - mu > beta_minus, got {alpha} - {mu} <= {beta_minus}")]
    Convergence { alpha: f64, mu: f64, beta_minus: f64 },

    #[error("leading term degenerates: {0}")]
    DegenerateLeadingTerm(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
