//! Heart-rate estimation from eye-tracking video fused with head-worn IMU
//! motion: signal core, ingestion and synchronization, preprocessing, the
//! learned estimator, a classical signal-processing baseline, the training
//! and evaluation protocol, a synthetic-recording generator, and downstream
//! HR feature extraction.

pub mod error;
pub mod geometry;
pub mod ingest;
pub mod npy;
pub mod par;
pub mod preprocess;
pub mod signal;
pub mod synth;

pub use error::{Error, Result};
