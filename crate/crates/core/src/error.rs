use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("order mismatch: left operand has order {left}, right operand has order {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular division: leading coefficient modulus {leading:e} is not above {eps:e}")]
    SingularDivision { leading: f64, eps: f64 },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error(
        "resolution error: order {order} captures only {captured:.4} of the inner function's \
         Taylor energy; increase the order"
    )]
    Resolution { order: usize, captured: f64 },

    #[error("invalid inner function spec: {0}")]
    InvalidSpec(String),

    #[error("spec parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
