use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("filter band [{low} Hz, {high} Hz] invalid for fs = {fs} Hz (Nyquist = {nyquist} Hz)")]
    InvalidBand {
        low: f64,
        high: f64,
        fs: f64,
        nyquist: f64,
    },

    #[error("unsupported filter order {0} (expected 2 or 4)")]
    UnsupportedOrder(usize),

    #[error("no valid aligned windows between prediction and reference")]
    NoAlignedWindows,

    #[error("sync not found: {0}")]
    SyncNotFound(String),

    #[error("invalid recording: {0}")]
    InvalidRecording(String),

    #[error("static video: frame-difference std {0:.3e} below threshold")]
    StaticVideo(f64),

    #[error("invalid region of interest: {0}")]
    InvalidRoi(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("training diverged at epoch {epoch}: {detail}")]
    Divergence { epoch: usize, detail: String },

    #[error("too few participants: got {got}, need at least {need}")]
    TooFewParticipants { got: usize, need: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {path}: {detail}")]
    Csv { path: String, detail: String },

    #[error("image error on {path}: {detail}")]
    Image { path: String, detail: String },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl ToString, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_string(),
            source,
        }
    }

    pub fn csv(path: impl ToString, detail: impl ToString) -> Self {
        Error::Csv {
            path: path.to_string(),
            detail: detail.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
