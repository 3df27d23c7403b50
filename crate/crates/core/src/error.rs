use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("node collision: nodes {0} and {1} are closer than 1e-6")]
    NodeCollision(usize, usize),

    #[error("degenerate eigenangles {0} and {1} coincide to 1e-12")]
    DegenerateAngles(usize, usize),

    #[error("accuracy failure in {what}: residual {residual:e} exceeds {tolerance:e}")]
    Accuracy {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("zeta has a pole at s = 1")]
    Pole,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
