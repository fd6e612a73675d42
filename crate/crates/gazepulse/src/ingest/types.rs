//! Data model for raw and synchronized multi-device recordings.

use std::collections::BTreeMap;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::signal::Signal1D;
use crate::{Error, Result};

/// Grayscale frame sequence at a fixed rate. Frames are `(h, w)` u8 arrays.
#[derive(Debug, Clone)]
pub struct VideoStream {
    pub frames: Vec<Array2<u8>>,
    pub fps: f64,
}

impl VideoStream {
    pub fn resolution(&self) -> (usize, usize) {
        self.frames
            .first()
            .map(|f| f.dim())
            .unwrap_or((0, 0))
    }

    pub fn duration_s(&self) -> f64 {
        self.frames.len() as f64 / self.fps
    }

    /// Timestamp of frame `i` on the recording reference clock.
    pub fn frame_time(&self, i: usize) -> f64 {
        i as f64 / self.fps
    }

    pub fn frame_times(&self) -> Vec<f64> {
        (0..self.frames.len()).map(|i| self.frame_time(i)).collect()
    }
}

/// Three-axis accelerometer trace with a shared clock.
#[derive(Debug, Clone)]
pub struct Imu3 {
    pub x: Signal1D,
    pub y: Signal1D,
    pub z: Signal1D,
}

impl Imu3 {
    pub fn new(x: Signal1D, y: Signal1D, z: Signal1D) -> Result<Self> {
        if x.len() != y.len() || y.len() != z.len() {
            return Err(Error::InvalidRecording("IMU axis length mismatch".into()));
        }
        if x.fs() != y.fs() || y.fs() != z.fs() {
            return Err(Error::InvalidRecording("IMU axis rate mismatch".into()));
        }
        Ok(Self { x, y, z })
    }

    pub fn fs(&self) -> f64 {
        self.x.fs()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.len() == 0
    }

    pub fn t0(&self) -> f64 {
        self.x.t0()
    }

    /// Summed per-axis absolute sample differences, one value per sample
    /// transition. This is the raw material of the motion-magnitude measure
    /// and of cross-device synchronization.
    pub fn abs_diff_sum(&self) -> Signal1D {
        let n = self.len();
        let mut out = Vec::with_capacity(n.saturating_sub(1));
        let (xs, ys, zs) = (self.x.samples(), self.y.samples(), self.z.samples());
        for i in 1..n {
            out.push(
                (xs[i] - xs[i - 1]).abs() + (ys[i] - ys[i - 1]).abs() + (zs[i] - zs[i - 1]).abs(),
            );
        }
        Signal1D::new(out, self.fs(), self.t0() + 1.0 / self.fs())
            .expect("diff series of valid IMU is valid")
    }
}

/// Activity annotation on the recording reference clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityAnnotation {
    pub label: ActivityLabel,
    pub start_s: f64,
    pub end_s: f64,
}

/// The capture-protocol activities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivityLabel {
    Video,
    Office,
    Kitchen,
    Dancing,
    Bike,
    Walking,
}

impl ActivityLabel {
    pub const ALL: [ActivityLabel; 6] = [
        ActivityLabel::Video,
        ActivityLabel::Office,
        ActivityLabel::Kitchen,
        ActivityLabel::Dancing,
        ActivityLabel::Bike,
        ActivityLabel::Walking,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ActivityLabel::Video => "video",
            ActivityLabel::Office => "office",
            ActivityLabel::Kitchen => "kitchen",
            ActivityLabel::Dancing => "dancing",
            ActivityLabel::Bike => "bike",
            ActivityLabel::Walking => "walking",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::InvalidRecording(format!("unknown activity label {s:?}")))
    }
}

impl std::fmt::Display for ActivityLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-recording manifest: stream locations, device rates, and participant
/// metadata. Serialized as one JSON file per recording.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordingManifest {
    pub participant: String,
    #[serde(default)]
    pub fitzpatrick_type: Option<u8>,
    #[serde(default)]
    pub age_bracket: Option<String>,
    pub video: VideoSource,
    pub imu_head_csv: String,
    pub ppg: SensorSource,
    pub ecg: SensorSource,
    pub activities_csv: String,
    #[serde(default)]
    pub device_ids: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VideoSource {
    /// Directory of numbered grayscale PNG frames, or an .mp4 file.
    pub path: String,
    pub fps: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSource {
    pub csv: String,
    pub fs: f64,
    /// Companion IMU trace recorded by the same device, used to recover its
    /// clock offset. Without it the stream is assumed pre-aligned.
    #[serde(default)]
    pub imu_csv: Option<String>,
}

/// A loaded, not-yet-synchronized recording. Signal t0 values are device
/// clocks; the video defines the reference clock.
#[derive(Debug, Clone)]
pub struct RawRecording {
    pub manifest: RecordingManifest,
    pub video: VideoStream,
    pub imu_head: Imu3,
    pub ppg: Signal1D,
    pub ecg: Signal1D,
    /// Companion IMU traces keyed by stream name ("ppg", "ecg").
    pub device_imus: BTreeMap<String, Imu3>,
    pub activities: Vec<ActivityAnnotation>,
}

impl RawRecording {
    pub fn validate(&self) -> Result<()> {
        if self.video.frames.is_empty() {
            return Err(Error::InvalidRecording("no video frames".into()));
        }
        let fps = self.video.fps;
        if !(fps == 10.0 || fps == 30.0) {
            return Err(Error::InvalidRecording(format!(
                "unsupported video fps {fps} (expected 10 or 30)"
            )));
        }
        let (h, w) = self.video.resolution();
        if h == 0 || w == 0 {
            return Err(Error::InvalidRecording("zero-size frames".into()));
        }
        if self.video.frames.iter().any(|f| f.dim() != (h, w)) {
            return Err(Error::InvalidRecording("inconsistent frame sizes".into()));
        }
        for seg in &self.activities {
            if !(seg.start_s < seg.end_s) {
                return Err(Error::InvalidRecording(format!(
                    "activity {} has empty span [{}, {})",
                    seg.label, seg.start_s, seg.end_s
                )));
            }
        }
        let mut sorted = self.activities.clone();
        sorted.sort_by(|a, b| a.start_s.partial_cmp(&b.start_s).unwrap());
        for pair in sorted.windows(2) {
            if pair[1].start_s < pair[0].end_s - 1e-9 {
                return Err(Error::InvalidRecording(format!(
                    "activities {} and {} overlap",
                    pair[0].label, pair[1].label
                )));
            }
        }
        Ok(())
    }
}

/// Per-device alignment estimated during synchronization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClockAlignment {
    /// Offset at the start anchor: reference time minus device time, seconds.
    pub offset_start_s: f64,
    /// Offset at the end anchor.
    pub offset_end_s: f64,
    /// Device-time positions of the two anchors.
    pub anchor_start_s: f64,
    pub anchor_end_s: f64,
    /// Normalized correlation of the sync pattern at each anchor.
    pub correlation: f64,
    /// Residual alignment error estimate (one resampled IMU sample), seconds.
    pub residual_s: f64,
}

impl ClockAlignment {
    /// Linear clock model between the two anchors.
    pub fn offset_at(&self, device_t: f64) -> f64 {
        let span = self.anchor_end_s - self.anchor_start_s;
        if span.abs() < 1e-9 {
            return self.offset_start_s;
        }
        let alpha = (device_t - self.anchor_start_s) / span;
        self.offset_start_s + alpha * (self.offset_end_s - self.offset_start_s)
    }

    pub fn to_reference(&self, device_t: f64) -> f64 {
        device_t + self.offset_at(device_t)
    }
}

/// An activity segment after validation against the reference sensors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivitySegment {
    pub label: ActivityLabel,
    pub start_s: f64,
    pub end_s: f64,
    pub excluded: bool,
    pub exclusion_mae_bpm: Option<f64>,
}

/// Streams resampled onto the video reference clock.
#[derive(Debug, Clone)]
pub struct SyncedRecording {
    pub participant: String,
    pub video: VideoStream,
    /// Per-frame motion magnitude, one value per frame.
    pub imu_mag: Signal1D,
    /// Contact PPG on the reference clock at its native rate.
    pub ppg: Signal1D,
    /// ECG on the reference clock at its native rate.
    pub ecg: Signal1D,
    pub activities: Vec<ActivitySegment>,
    pub alignments: BTreeMap<String, ClockAlignment>,
}

impl SyncedRecording {
    /// Segments that survived the quality gate.
    pub fn included_segments(&self) -> impl Iterator<Item = &ActivitySegment> {
        self.activities.iter().filter(|s| !s.excluded)
    }
}
