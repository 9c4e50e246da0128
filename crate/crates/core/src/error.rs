use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across grid, detector, simulator, evaluation and file handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field dimension mismatch: expected {expected} values, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite value in {component} at taxel {index}")]
    NonFinite {
        component: &'static str,
        index: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("contact disc (|center| = {center_mm:.3} mm, radius {radius_mm:.3} mm) does not fit within grid half side {half_side_mm:.3} mm")]
    ContactOutsideGrid {
        center_mm: f64,
        radius_mm: f64,
        half_side_mm: f64,
    },

    #[error("timestamp regression: {next} s after {previous} s")]
    TimestampRegression { previous: f64, next: f64 },

    #[error("{predictions} predictions for {frames} frames")]
    LengthMismatch { predictions: usize, frames: usize },

    #[error("cannot average an empty list of reports")]
    EmptyReports,

    #[error("cannot average reports from different detectors or configurations")]
    MixedConfigs,

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: String, found: String },

    #[error("truncated payload: expected {expected} bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },

    #[error("trailing data: expected {expected} bytes, found {actual}")]
    TrailingData { expected: u64, actual: u64 },

    #[error("frame {frame}: {source}")]
    CorruptFrame {
        frame: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid header: {0}")]
    InvalidHeader(String),

    #[error("label file {path}:{line}: {message}")]
    Label {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unknown scenario preset {name:?} (available: {available})")]
    UnknownPreset { name: String, available: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
