use thiserror::Error;

use crate::formparse::ParseError;
use crate::numfield::NumError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("the zero form does not define a foliation")]
    ZeroForm,
    #[error("coefficients share the non-unit factor {0}")]
    NotSaturated(String),
    #[error("curve is not invariant by the foliation")]
    NotInvariant,
    #[error("Newton polygon of an empty support")]
    EmptySupport,
    #[error("dicritical blow-up")]
    Dicritical,
    #[error("reduction exceeded depth {0}")]
    DepthExceeded(u32),
    #[error("reduction tree is truncated")]
    Truncated,
    #[error("index undefined: {0}")]
    UndefinedIndex(String),
    #[error("independent computations disagree: {0}")]
    OracleMismatch(String),
    #[error("origin is not a singular point")]
    NotSingular,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
