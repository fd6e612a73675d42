//! Frame-rate resampling for the reduced-fps experiments.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::ingest::RawRecording;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FpsMode {
    /// Keep the native 30 fps stream.
    Native30,
    /// Keep every third frame: 10 fps.
    Down10,
    /// Downsample to 10 fps, then linearly interpolate two frames between
    /// each kept pair back to 30 fps.
    Down10Up30,
}

impl FpsMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "30" | "native30" => Ok(FpsMode::Native30),
            "down10" => Ok(FpsMode::Down10),
            "down10_up30" => Ok(FpsMode::Down10Up30),
            other => Err(Error::InvalidConfig(format!(
                "unknown fps mode {other:?} (expected 30 | down10 | down10_up30)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FpsMode::Native30 => "30",
            FpsMode::Down10 => "down10",
            FpsMode::Down10Up30 => "down10_up30",
        }
    }
}

/// Apply a frame-rate mode to a raw recording. Sensor streams and activity
/// annotations are untouched; only the video changes.
pub fn resample_fps(rec: &RawRecording, mode: FpsMode) -> Result<RawRecording> {
    if mode == FpsMode::Native30 {
        return Ok(rec.clone());
    }
    if (rec.video.fps - 30.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!(
            "fps resampling expects a 30 fps source, got {}",
            rec.video.fps
        )));
    }
    let kept: Vec<Array2<u8>> = rec.video.frames.iter().step_by(3).cloned().collect();
    let mut out = rec.clone();
    match mode {
        FpsMode::Native30 => unreachable!(),
        FpsMode::Down10 => {
            out.video.frames = kept;
            out.video.fps = 10.0;
        }
        FpsMode::Down10Up30 => {
            let mut frames = Vec::with_capacity((kept.len().saturating_sub(1)) * 3 + 1);
            for pair in kept.windows(2) {
                let (a, b) = (&pair[0], &pair[1]);
                frames.push(a.clone());
                frames.push(lerp_frames(a, b, 1.0 / 3.0));
                frames.push(lerp_frames(a, b, 2.0 / 3.0));
            }
            if let Some(last) = kept.last() {
                frames.push(last.clone());
            }
            out.video.frames = frames;
            out.video.fps = 30.0;
        }
    }
    Ok(out)
}

fn lerp_frames(a: &Array2<u8>, b: &Array2<u8>, alpha: f64) -> Array2<u8> {
    let mut out = a.clone();
    for (o, (&u, &v)) in out.iter_mut().zip(a.iter().zip(b.iter())) {
        *o = ((1.0 - alpha) * u as f64 + alpha * v as f64).round() as u8;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::ActivityLabel;
    use crate::synth::{generate, ActivityPlan, SynthSpec};

    fn rec(n_frames: usize) -> RawRecording {
        let spec = SynthSpec {
            frame_h: 16,
            frame_w: 16,
            activities: vec![ActivityPlan {
                label: ActivityLabel::Video,
                duration_s: n_frames as f64 / 30.0,
            }],
            sync_pattern: false,
            imu_fs: 60.0,
            ecg_fs: 256.0,
            ..SynthSpec::default()
        };
        generate(&spec, 3).unwrap().0
    }

    #[test]
    fn down10_count_is_ceil_n_over_3() {
        for n in [300, 301, 302] {
            let r = rec(n);
            let n_actual = r.video.frames.len();
            let down = resample_fps(&r, FpsMode::Down10).unwrap();
            assert_eq!(down.video.frames.len(), n_actual.div_ceil(3));
            assert_eq!(down.video.fps, 10.0);
        }
    }

    #[test]
    fn identical_frames_interpolate_to_identical() {
        let mut r = rec(90);
        let f0 = r.video.frames[0].clone();
        for f in r.video.frames.iter_mut() {
            *f = f0.clone();
        }
        let up = resample_fps(&r, FpsMode::Down10Up30).unwrap();
        for f in &up.video.frames {
            assert_eq!(f, &f0);
        }
    }

    #[test]
    fn integer_ramp_reconstructed_exactly() {
        let mut r = rec(91);
        for (t, f) in r.video.frames.iter_mut().enumerate() {
            f.fill((t % 250) as u8);
        }
        let up = resample_fps(&r, FpsMode::Down10Up30).unwrap();
        // Interior frames of an integer ramp come back exactly.
        for (t, f) in up.video.frames.iter().enumerate() {
            assert_eq!(f[[0, 0]], (t % 250) as u8, "frame {t}");
        }
    }

    #[test]
    fn up30_then_down10_is_stable() {
        let r = rec(90);
        let once = resample_fps(&r, FpsMode::Down10Up30).unwrap();
        let twice = resample_fps(&once, FpsMode::Down10Up30).unwrap();
        assert_eq!(once.video.frames.len(), twice.video.frames.len());
        for (a, b) in once.video.frames.iter().zip(&twice.video.frames) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn non_30fps_source_rejected() {
        let r = rec(90);
        let down = resample_fps(&r, FpsMode::Down10).unwrap();
        assert!(resample_fps(&down, FpsMode::Down10).is_err());
    }
}
