//! Turning synced recordings into model-ready clips: resizing, standardized
//! frame differences, label differencing, windowing, augmentation, and
//! frame-rate resampling.

mod augment;
mod cache;
mod diffs;
mod fps;
mod resize;
mod windows;

pub use augment::{augment, AugmentParams, MIN_CROP_FRACTION, ROTATION_DEG};
pub use cache::{load_clip, read_index, write_clips, ClipIndexEntry, INDEX_FILE};
pub use diffs::{
    cumulative_reconstruction, frame_difference_std, standardize_labels,
    standardized_frame_differences, MIN_DIFF_STD,
};
pub use fps::{resample_fps, FpsMode};
pub use resize::{resize_frame, to_model_frames};
pub use windows::{window_clips, Clip, ClipMeta};

use serde::{Deserialize, Serialize};

use crate::ingest::{ActivitySegment, SyncedRecording};
use crate::{Error, Result};

/// Model-input geometry. Defaults: 128 transitions of 48x128 frames.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PreprocessConfig {
    pub t_len: usize,
    pub height: usize,
    pub width: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            t_len: 128,
            height: 48,
            width: 128,
        }
    }
}

/// A recording reduced to model scale with per-recording standardization
/// constants already applied.
#[derive(Debug, Clone)]
pub struct PreprocessedRecording {
    pub participant: String,
    pub fps: f64,
    /// Resized frames in [0, 1].
    pub frames: Vec<ndarray::Array2<f64>>,
    /// Pooled std of all frame differences (the divisor used in clips).
    pub diff_std: f64,
    /// Std of the PPG first differences (the label divisor).
    pub label_std: f64,
    /// Standardized PPG differences per frame transition (len = frames - 1).
    pub labels: Vec<f64>,
    /// Per-frame motion magnitude, z-scored over the recording.
    pub imu_standardized: Vec<f64>,
    pub segments: Vec<ActivitySegment>,
}

/// Resize, standardize, and label one synced recording.
pub fn preprocess_recording(
    rec: &SyncedRecording,
    cfg: &PreprocessConfig,
) -> Result<PreprocessedRecording> {
    if rec.video.frames.len() < cfg.t_len + 1 {
        return Err(Error::InsufficientData(format!(
            "recording has {} frames, need at least {}",
            rec.video.frames.len(),
            cfg.t_len + 1
        )));
    }
    let frames = to_model_frames(&rec.video.frames, cfg.height, cfg.width)?;
    let diff_std = frame_difference_std(&frames)?;
    if diff_std < MIN_DIFF_STD {
        return Err(Error::StaticVideo(diff_std));
    }
    let frame_times = rec.video.frame_times();
    let (labels, label_std) = standardize_labels(&rec.ppg, &frame_times)?;

    let mags = rec.imu_mag.samples();
    let n = mags.len() as f64;
    let mean = mags.iter().sum::<f64>() / n;
    let std = (mags.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / n).sqrt();
    let imu_standardized = if std > 0.0 {
        mags.iter().map(|m| (m - mean) / std).collect()
    } else {
        vec![0.0; mags.len()]
    };

    Ok(PreprocessedRecording {
        participant: rec.participant.clone(),
        fps: rec.video.fps,
        frames,
        diff_std,
        label_std,
        labels,
        imu_standardized,
        segments: rec.activities.clone(),
    })
}
