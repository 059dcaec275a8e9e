use thiserror::Error;

use crate::spectral::Representation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unsupported dimension {0}, expected 2 or 3")]
    UnsupportedDimension(usize),

    #[error("representation error: expected {expected:?} field, got {found:?}")]
    Representation {
        expected: Representation,
        found: Representation,
    },

    #[error("arity error: expected {expected} component(s), got {found}")]
    Arity { expected: usize, found: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index {what}={value} outside [{lo}, {hi}]")]
    Index {
        what: &'static str,
        value: i32,
        lo: i32,
        hi: i32,
    },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("input is not divergence-free (relative residual {0:e})")]
    NotDivergenceFree(f64),

    #[error("{active} active modes exceed the oracle limit of {limit}")]
    Size { active: usize, limit: usize },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("envelope degenerate: {0}")]
    EnvelopeDegenerate(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_index(what: &'static str, value: i32, lo: i32, hi: i32) -> Result<()> {
    if value < lo || value > hi {
        return Err(Error::Index { what, value, lo, hi });
    }
    Ok(())
}
