use thiserror::Error;

use crate::hyp::Mode;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arithmetic mode mismatch: {0} vs {1}")]
    ModeMismatch(Mode, Mode),

    #[error("element is not hyperbolic (|trace| = {0})")]
    NotHyperbolic(String),

    #[error("involution representative is not order 2: {0}")]
    NotInvolution(String),

    #[error("operation requires exact integral matrices: {0}")]
    NotExact(String),

    #[error("invalid group spec, field `{field}`: {message}")]
    InvalidGroup { field: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown built-in group {0:?} (expected psl2z or triangle237)")]
    UnknownGroup(String),

    #[error("enumeration incomplete: {0}")]
    BudgetExceeded(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("histogram has zero total mass")]
    ZeroMass,

    #[error("class {0} is not maximal")]
    NonMaximal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("constant formulas disagree: {0} vs {1}")]
    ConstantMismatch(f64, f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn group(field: &str, message: impl Into<String>) -> Self {
        Error::InvalidGroup {
            field: field.to_string(),
            message: message.into(),
        }
    }
}
