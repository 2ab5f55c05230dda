use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("accuracy loss in recurrence construction: {0}")]
    AccuracyLoss(String),

    #[error("degree {requested} beyond recurrence table extent {available}")]
    TableExtent { requested: usize, available: usize },

    #[error("invalid harmonic index (k={k}, i={i})")]
    InvalidHarmonicIndex { k: usize, i: usize },

    #[error("basis index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("coefficient ordering mismatch: expected {expected}, found {found}")]
    OrderingMismatch { expected: String, found: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entry ({row}, {col}) lies outside the band mask")]
    OutsideMask { row: usize, col: usize },

    #[error("operator couples Fourier modes (max cross-mode entry {max_entry:e})")]
    NotDecoupled { max_entry: f64 },

    #[error("singular system in Fourier mode {mode:?} at pivot {pivot}")]
    SingularSystem { mode: Option<usize>, pivot: usize },

    #[error("degree error: {0}")]
    Degree(String),

    #[error("boundary data not resolved to degree {degree}: tail {tail:e}")]
    BoundaryResolution { degree: usize, tail: f64 },

    #[error("point is not on the cap: {0}")]
    InvalidPoint(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
