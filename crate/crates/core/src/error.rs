use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("direction lies within {tol:e} of the poles")]
    PoleInput { tol: f64 },

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("curvature density {value:.3e} at angle {angle:.6} is below -{tol:.3e}; not a support function")]
    NegativeCurvature { angle: f64, value: f64, tol: f64 },

    #[error("need at least two distinct vertices")]
    DegenerateInput,

    #[error("measure is not centered: |first moment| = {moment:.3e} exceeds {limit:.3e}")]
    NotCentered { moment: f64, limit: f64 },

    #[error("measure is not even: deviation {deviation:.3e} exceeds {limit:.3e}")]
    NotEven { deviation: f64, limit: f64 },

    #[error("operation requires an atom-free family")]
    AtomsPresent,

    #[error("operation not supported for this body variant: {0}")]
    UnsupportedVariant(&'static str),

    #[error("ambient dimension {0} is not supported here")]
    UnsupportedDimension(usize),

    #[error("body not supported: {0}")]
    UnsupportedBody(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
