use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("joint index {index} out of range 1..={max}")]
    JointIndex { index: usize, max: usize },

    #[error("dimension mismatch: expected {expected} {what}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    #[error("integration produced a non-finite state at step {step}")]
    Integration { step: usize },

    #[error("empty contact set at sample {sample}")]
    Contact { sample: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParam {
        name,
        reason: reason.into(),
    }
}
