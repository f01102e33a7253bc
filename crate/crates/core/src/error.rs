use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("code dimension {dimension} exceeds the enumeration limit of {limit}")]
    DimensionTooLarge { dimension: usize, limit: u32 },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("weight {weight} outside 1..={n}")]
    WeightOutOfRange { weight: usize, n: usize },

    #[error("vector has weight 0")]
    ZeroVector,

    #[error("exhaustive enumeration of {nm} matrix bits exceeds the cap of {cap}")]
    TooLarge { nm: usize, cap: usize },

    #[error("{what} = {value} is outside its domain")]
    OutOfDomain { what: &'static str, value: f64 },

    #[error("functional has no asymptotic coefficient exponent")]
    NoAsymptoticForm,

    #[error("expectation exponent is -inf everywhere")]
    DegenerateProfile,

    #[error("mean must be positive, got {0}")]
    NonpositiveMean(f64),

    #[error("invalid ensemble parameters: {0}")]
    InvalidParams(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_domain(what: &'static str, value: f64, ok: bool) -> Result<()> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::OutOfDomain { what, value })
    }
}
