use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown factor label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate factor label `{0}`")]
    DuplicateLabel(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("projector family violates the {invariant} invariant (deviation {deviation:.3e})")]
    InvalidProjectors { invariant: &'static str, deviation: f64 },

    #[error("operator is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("channel is not trace-preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("channel is trace-increasing (excess {0:.3e})")]
    TraceIncreasing(f64),

    #[error("missing operation for reference label `{0}`")]
    MissingLabel(String),

    #[error("invalid event: {0}")]
    InvalidEvent(String),

    #[error("invalid lab: {0}")]
    InvalidLab(String),

    #[error("amplitude outside the one-particle sector ({0:.3e})")]
    OutsideSector(f64),

    #[error("amplitudes are not normalised (|alpha|^2 + |beta|^2 = {0})")]
    NotNormalised(f64),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("lab matches none of the fine, effective or coarse descriptions")]
    Unclassifiable,
}

pub type Result<T> = std::result::Result<T, Error>;
