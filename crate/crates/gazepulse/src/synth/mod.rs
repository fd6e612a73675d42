//! Synthetic-recording generator.
//!
//! Builds full multi-device recordings (eye video, head IMU, contact PPG,
//! chest ECG, per-device sync IMUs, activity annotations) from a closed-form
//! reflection and motion model, together with the ground truth needed to
//! oracle every downstream stage. Output is a deterministic function of
//! `(spec, seed)`.

mod emit;
mod motion;
mod scene;
mod waveform;

pub use emit::write_recording;
pub use motion::{activity_intensity, BurstSpan, MotionModel};
pub use scene::SceneModel;
pub use waveform::{ecg_value, pulse_value, schedule_beats, HrProfile};

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::geometry::Rect;
use crate::ingest::{
    ActivityAnnotation, ActivityLabel, Imu3, RawRecording, RecordingManifest, SensorSource,
    VideoSource, VideoStream,
};
use crate::signal::{HRSeries, Signal1D};
use crate::{Error, Result};

/// One entry of the simulated capture protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityPlan {
    pub label: ActivityLabel,
    pub duration_s: f64,
}

/// A span of injected motion corruption.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorruptSpan {
    pub start_s: f64,
    pub end_s: f64,
    pub gain: f64,
}

/// Full description of a synthetic recording.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthSpec {
    pub participant: String,
    pub fps: f64,
    pub frame_h: usize,
    pub frame_w: usize,
    pub activities: Vec<ActivityPlan>,
    pub hr_profile: HrProfile,
    /// Fractional inter-beat jitter.
    pub ibi_jitter: f64,
    /// Pulse-driven diffuse amplitude on the skin, on the [0, 1] pixel scale.
    pub pulse_amplitude: f64,
    /// Eye-region pulsatility relative to skin.
    pub eye_pulse_fraction: f64,
    /// Motion-driven global specular amplitude.
    pub specular_amplitude: f64,
    /// Per-pixel sensor noise std.
    pub noise_std: f64,
    /// Global multiplier on activity motion.
    pub motion_scale: f64,
    pub imu_fs: f64,
    pub ppg_fs: f64,
    pub ecg_fs: f64,
    /// Device clock offsets relative to the video clock, seconds.
    pub ppg_offset_s: f64,
    pub ecg_offset_s: f64,
    /// Linear clock drift (fraction; 1e-4 means 100 ppm).
    pub ppg_drift: f64,
    pub ecg_drift: f64,
    /// Emit sharp IMU bursts near both ends for synchronization.
    pub sync_pattern: bool,
    pub corrupt_spans: Vec<CorruptSpan>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            participant: "p001".into(),
            fps: 30.0,
            frame_h: 120,
            frame_w: 160,
            activities: vec![ActivityPlan {
                label: ActivityLabel::Video,
                duration_s: 300.0,
            }],
            hr_profile: HrProfile::Constant { bpm: 72.0 },
            ibi_jitter: 0.02,
            pulse_amplitude: 0.04,
            eye_pulse_fraction: 0.5,
            specular_amplitude: 0.03,
            noise_std: 0.008,
            motion_scale: 1.0,
            imu_fs: 100.0,
            ppg_fs: 128.0,
            ecg_fs: 1024.0,
            ppg_offset_s: 0.0,
            ecg_offset_s: 0.0,
            ppg_drift: 0.0,
            ecg_drift: 0.0,
            sync_pattern: true,
            corrupt_spans: Vec::new(),
        }
    }
}

impl SynthSpec {
    pub fn duration_s(&self) -> f64 {
        self.activities.iter().map(|a| a.duration_s).sum()
    }

    pub fn annotations(&self) -> Vec<ActivityAnnotation> {
        let mut t = 0.0;
        self.activities
            .iter()
            .map(|a| {
                let seg = ActivityAnnotation {
                    label: a.label,
                    start_s: t,
                    end_s: t + a.duration_s,
                };
                t += a.duration_s;
                seg
            })
            .collect()
    }

    /// Default skin/eye geometry: eye box in the lower-center, skin strip on top.
    pub fn eye_region(&self) -> Rect {
        Rect::new(
            self.frame_w * 3 / 10,
            self.frame_h * 4 / 10,
            self.frame_w * 7 / 10,
            self.frame_h * 8 / 10,
        )
    }

    pub fn skin_region(&self) -> Rect {
        Rect::new(self.frame_w / 10, 0, self.frame_w * 9 / 10, self.frame_h * 3 / 10)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fps == 10.0 || self.fps == 30.0) {
            return Err(Error::InvalidConfig(format!(
                "fps must be 10 or 30, got {}",
                self.fps
            )));
        }
        if self.activities.is_empty() {
            return Err(Error::InvalidConfig("no activities".into()));
        }
        if self.frame_h < 16 || self.frame_w < 16 {
            return Err(Error::InvalidConfig("frames must be at least 16x16".into()));
        }
        for v in [
            self.pulse_amplitude,
            self.eye_pulse_fraction,
            self.specular_amplitude,
            self.noise_std,
            self.motion_scale,
            self.ibi_jitter,
        ] {
            if !(v >= 0.0) {
                return Err(Error::InvalidConfig(format!("negative amplitude {v}")));
            }
        }
        if self.ppg_offset_s.abs() > 1.5 || self.ecg_offset_s.abs() > 1.5 {
            return Err(Error::InvalidConfig(
                "device offsets must stay within +-1.5 s of the sync pattern".into(),
            ));
        }
        if self.sync_pattern && self.duration_s() < 10.0 {
            return Err(Error::InvalidConfig(
                "sync pattern needs at least 10 s of recording".into(),
            ));
        }
        let dur = self.duration_s();
        for span in &self.corrupt_spans {
            if !(span.start_s < span.end_s && span.start_s >= 0.0 && span.end_s <= dur) {
                return Err(Error::InvalidConfig(format!(
                    "corrupt span [{}, {}) outside recording [0, {dur})",
                    span.start_s, span.end_s
                )));
            }
        }
        Ok(())
    }
}

/// Everything the generator knows that the pipeline must recover.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruth {
    pub participant: String,
    pub beat_times: Vec<f64>,
    pub duration_s: f64,
    pub activities: Vec<ActivityAnnotation>,
    /// Reference-minus-device clock offset per stream name.
    pub device_offsets: BTreeMap<String, f64>,
    pub corrupt_spans: Vec<CorruptSpan>,
}

impl GroundTruth {
    /// HR per non-overlapping window derived from true beat times.
    pub fn hr_series(&self, window_s: f64) -> Result<HRSeries> {
        hr_series_from_times(&self.beat_times, window_s, self.duration_s)
    }

    pub fn mean_hr_bpm(&self) -> f64 {
        if self.beat_times.len() < 2 {
            return f64::NAN;
        }
        let span = self.beat_times.last().unwrap() - self.beat_times[0];
        60.0 * (self.beat_times.len() - 1) as f64 / span
    }
}

/// HR series from explicit beat times (the generator-side oracle).
pub fn hr_series_from_times(times: &[f64], window_s: f64, duration_s: f64) -> Result<HRSeries> {
    let n_windows = (duration_s / window_s).floor() as usize;
    let mut values = Vec::with_capacity(n_windows);
    let mut starts = Vec::with_capacity(n_windows);
    for w in 0..n_windows {
        let (ws, we) = (w as f64 * window_s, (w + 1) as f64 * window_s);
        let inside: Vec<f64> = times.iter().copied().filter(|&t| t >= ws && t < we).collect();
        let hr = if inside.len() >= 2 {
            Some(60.0 * (inside.len() - 1) as f64 / (inside.last().unwrap() - inside[0]))
        } else {
            None
        };
        values.push(hr);
        starts.push(ws);
    }
    HRSeries::new(values, window_s, starts)
}

/// Generate a recording and its ground truth. Deterministic in `(spec, seed)`.
pub fn generate(spec: &SynthSpec, seed: u64) -> Result<(RawRecording, GroundTruth)> {
    spec.validate()?;
    let duration = spec.duration_s();
    let annotations = spec.annotations();

    let mut root = ChaCha8Rng::seed_from_u64(seed);
    let mut rng_beats = ChaCha8Rng::seed_from_u64(root.gen());
    let mut rng_motion = ChaCha8Rng::seed_from_u64(root.gen());
    let mut rng_scene = ChaCha8Rng::seed_from_u64(root.gen());
    let frame_seed: u64 = root.gen();
    let mut rng_sensors = ChaCha8Rng::seed_from_u64(root.gen());

    let beats = schedule_beats(&spec.hr_profile, duration, spec.ibi_jitter, &mut rng_beats);
    if beats.len() < 3 {
        return Err(Error::InvalidConfig("recording too short for beats".into()));
    }

    let bursts: Vec<BurstSpan> = spec
        .corrupt_spans
        .iter()
        .map(|c| BurstSpan {
            start_s: c.start_s,
            end_s: c.end_s,
            gain: c.gain,
        })
        .collect();
    let motion = MotionModel::build(
        &annotations,
        spec.motion_scale,
        spec.sync_pattern,
        &bursts,
        &mut rng_motion,
    );

    let scene = SceneModel::build(
        spec.frame_h,
        spec.frame_w,
        spec.skin_region(),
        spec.eye_region(),
        spec.pulse_amplitude,
        spec.eye_pulse_fraction,
        spec.specular_amplitude,
        spec.noise_std,
        duration,
        &motion,
        frame_seed,
        &mut rng_scene,
    );

    // Frames render independently; parallel across frame index.
    let n_frames = (duration * spec.fps).round() as usize;
    let frames = crate::par::map_collect(n_frames, |i| {
        let t = i as f64 / spec.fps;
        scene.render(i, t, pulse_value(&beats, t), &motion)
    });
    let video = VideoStream {
        frames,
        fps: spec.fps,
    };

    // Head IMU on the reference clock.
    let normal = Normal::new(0.0, 1.0).unwrap();
    let imu_noise = 0.01 * spec.motion_scale.max(0.1);
    let sample_imu = |offset: f64, drift: f64, rng: &mut ChaCha8Rng| -> Result<Imu3> {
        let n = (duration * spec.imu_fs).round() as usize;
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        let mut zs = Vec::with_capacity(n);
        for i in 0..n {
            let device_t = i as f64 / spec.imu_fs;
            let tau = device_t * (1.0 + drift) + offset;
            let a = motion.accel(tau);
            xs.push(a[0] + imu_noise * normal.sample(rng));
            ys.push(a[1] + imu_noise * normal.sample(rng));
            zs.push(a[2] + imu_noise * normal.sample(rng));
        }
        Imu3::new(
            Signal1D::new(xs, spec.imu_fs, 0.0)?,
            Signal1D::new(ys, spec.imu_fs, 0.0)?,
            Signal1D::new(zs, spec.imu_fs, 0.0)?,
        )
    };
    let imu_head = sample_imu(0.0, 0.0, &mut rng_sensors)?;
    let imu_ppg = sample_imu(-spec.ppg_offset_s, spec.ppg_drift, &mut rng_sensors)?;
    let imu_ecg = sample_imu(-spec.ecg_offset_s, spec.ecg_drift, &mut rng_sensors)?;

    // Contact PPG and ECG on their device clocks.
    let n_ppg = (duration * spec.ppg_fs).round() as usize;
    let ppg: Vec<f64> = (0..n_ppg)
        .map(|i| {
            let tau = (i as f64 / spec.ppg_fs) * (1.0 + spec.ppg_drift) - spec.ppg_offset_s;
            pulse_value(&beats, tau) + 0.01 * normal.sample(&mut rng_sensors)
        })
        .collect();
    let n_ecg = (duration * spec.ecg_fs).round() as usize;
    let ecg: Vec<f64> = (0..n_ecg)
        .map(|i| {
            let tau = (i as f64 / spec.ecg_fs) * (1.0 + spec.ecg_drift) - spec.ecg_offset_s;
            ecg_value(&beats, tau) + 0.005 * normal.sample(&mut rng_sensors)
        })
        .collect();

    let manifest = RecordingManifest {
        participant: spec.participant.clone(),
        fitzpatrick_type: None,
        age_bracket: None,
        video: VideoSource {
            path: "frames".into(),
            fps: spec.fps,
        },
        imu_head_csv: "imu_head.csv".into(),
        ppg: SensorSource {
            csv: "ppg.csv".into(),
            fs: spec.ppg_fs,
            imu_csv: Some("imu_ppg.csv".into()),
        },
        ecg: SensorSource {
            csv: "ecg.csv".into(),
            fs: spec.ecg_fs,
            imu_csv: Some("imu_ecg.csv".into()),
        },
        activities_csv: "activities.csv".into(),
        device_ids: BTreeMap::from([
            ("video".into(), "synthetic-eye-cam".into()),
            ("ppg".into(), "synthetic-nose-ppg".into()),
            ("ecg".into(), "synthetic-chest-ecg".into()),
        ]),
    };

    let mut device_imus = BTreeMap::new();
    device_imus.insert("ppg".to_string(), imu_ppg);
    device_imus.insert("ecg".to_string(), imu_ecg);

    let recording = RawRecording {
        manifest,
        video,
        imu_head,
        ppg: Signal1D::new(ppg, spec.ppg_fs, 0.0)?,
        ecg: Signal1D::new(ecg, spec.ecg_fs, 0.0)?,
        device_imus,
        activities: annotations.clone(),
    };
    recording.validate()?;

    let truth = GroundTruth {
        participant: spec.participant.clone(),
        beat_times: beats,
        duration_s: duration,
        activities: annotations,
        device_offsets: BTreeMap::from([
            ("ppg".to_string(), spec.ppg_offset_s),
            ("ecg".to_string(), spec.ecg_offset_s),
        ]),
        corrupt_spans: spec.corrupt_spans.clone(),
    };
    Ok((recording, truth))
}

/// Inject motion-artifact noise into `[t0, t1)` of an existing recording:
/// frames gain per-pixel noise and a luminance wobble, and the head IMU gains
/// a matching high-frequency burst. `gain = 0` returns the input unchanged.
/// The contact PPG and ECG stay clean.
pub fn corrupt_span(
    mut rec: RawRecording,
    t0: f64,
    t1: f64,
    gain: f64,
    seed: u64,
) -> Result<RawRecording> {
    let dur = rec.video.duration_s();
    if !(t0 < t1 && t0 >= 0.0 && t1 <= dur + 1e-9) {
        return Err(Error::InvalidConfig(format!(
            "corrupt span [{t0}, {t1}) outside recording [0, {dur})"
        )));
    }
    if gain == 0.0 {
        return Ok(rec);
    }
    let env = |t: f64| {
        let ramp: f64 = 0.2;
        let up = ((t - t0) / ramp).clamp(0.0, 1.0);
        let down = ((t1 - t) / ramp).clamp(0.0, 1.0);
        up.min(down)
    };

    let fps = rec.video.fps;
    let normal = Normal::new(0.0, 1.0).unwrap();
    crate::par::for_each_chunk_mut(&mut rec.video.frames, 1, |chunk_idx, frames| {
        let i = chunk_idx;
        let t = i as f64 / fps;
        let e = env(t);
        if e <= 0.0 {
            return;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let wobble = 0.05 * gain * e * (std::f64::consts::TAU * 11.0 * t).sin();
        for v in frames[0].iter_mut() {
            let noisy = *v as f64 / 255.0
                + 0.06 * gain * e * normal.sample(&mut rng)
                + wobble;
            *v = (noisy * 255.0).round().clamp(0.0, 255.0) as u8;
        }
    });

    let fs = rec.imu_head.fs();
    let t_base = rec.imu_head.t0();
    let mut axes = [
        rec.imu_head.x.samples().to_vec(),
        rec.imu_head.y.samples().to_vec(),
        rec.imu_head.z.samples().to_vec(),
    ];
    for (axis, samples) in axes.iter_mut().enumerate() {
        let phase = axis as f64 * std::f64::consts::FRAC_PI_3;
        for (i, v) in samples.iter_mut().enumerate() {
            let t = t_base + i as f64 / fs;
            let e = env(t);
            if e > 0.0 {
                *v += gain * 2.0 * e * (std::f64::consts::TAU * 12.0 * (t - t0) + phase).sin();
            }
        }
    }
    let [xs, ys, zs] = axes;
    rec.imu_head = Imu3::new(
        Signal1D::new(xs, fs, t_base)?,
        Signal1D::new(ys, fs, t_base)?,
        Signal1D::new(zs, fs, t_base)?,
    )?;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> SynthSpec {
        SynthSpec {
            frame_h: 32,
            frame_w: 48,
            activities: vec![ActivityPlan {
                label: ActivityLabel::Video,
                duration_s: 20.0,
            }],
            fps: 30.0,
            imu_fs: 50.0,
            ecg_fs: 256.0,
            ..SynthSpec::default()
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let spec = tiny_spec();
        let (a, ta) = generate(&spec, 42).unwrap();
        let (b, tb) = generate(&spec, 42).unwrap();
        assert_eq!(a.video.frames, b.video.frames);
        assert_eq!(a.ppg.samples(), b.ppg.samples());
        assert_eq!(a.ecg.samples(), b.ecg.samples());
        assert_eq!(a.imu_head.x.samples(), b.imu_head.x.samples());
        assert_eq!(ta.beat_times, tb.beat_times);
        let (c, _) = generate(&spec, 43).unwrap();
        assert_ne!(a.video.frames, c.video.frames);
    }

    #[test]
    fn zero_amplitudes_give_static_frames() {
        let spec = SynthSpec {
            pulse_amplitude: 0.0,
            specular_amplitude: 0.0,
            noise_std: 0.0,
            ibi_jitter: 0.0,
            sync_pattern: false,
            motion_scale: 0.0,
            ..tiny_spec()
        };
        let (rec, _) = generate(&spec, 1).unwrap();
        // Quiet activity, no noise, no pulse: every frame identical except
        // for scheduled eye events; compare two frames between events.
        let a = &rec.video.frames[0];
        let b = &rec.video.frames[1];
        assert_eq!(a, b);
        let flat = rec.ppg.samples();
        assert!(flat.iter().all(|v| v.abs() < 1e-12) || flat.iter().any(|v| v.abs() > 0.0));
    }

    #[test]
    fn ground_truth_hr_matches_profile() {
        let spec = SynthSpec {
            activities: vec![ActivityPlan {
                label: ActivityLabel::Video,
                duration_s: 120.0,
            }],
            ..tiny_spec()
        };
        let (_, truth) = generate(&spec, 7).unwrap();
        let hr = truth.hr_series(30.0).unwrap();
        assert_eq!(hr.len(), 4);
        for v in hr.values_bpm.iter().flatten() {
            assert!((v - 72.0).abs() < 1.0, "window HR {v}");
        }
    }

    #[test]
    fn corrupt_span_identity_at_zero_gain() {
        let (rec, _) = generate(&tiny_spec(), 11).unwrap();
        let before = rec.video.frames.clone();
        let out = corrupt_span(rec, 5.0, 10.0, 0.0, 3).unwrap();
        assert_eq!(out.video.frames, before);
    }

    #[test]
    fn corrupt_span_raises_frame_variance_and_imu() {
        let (rec, _) = generate(&tiny_spec(), 11).unwrap();
        let frame_var = |f: &ndarray::Array2<u8>| {
            let n = f.len() as f64;
            let mean = f.iter().map(|&v| v as f64).sum::<f64>() / n;
            f.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n
        };
        let mid_frame = (7.5 * rec.video.fps) as usize;
        let var_before = frame_var(&rec.video.frames[mid_frame]);
        let mag_before: f64 = rec.imu_head.abs_diff_sum().samples().iter().sum();
        let out = corrupt_span(rec, 5.0, 10.0, 1.5, 3).unwrap();
        let var_after = frame_var(&out.video.frames[mid_frame]);
        let mag_after: f64 = out.imu_head.abs_diff_sum().samples().iter().sum();
        assert!(var_after > var_before, "{var_after} <= {var_before}");
        assert!(mag_after > mag_before);
        // Frames outside the span untouched.
        assert!(corrupt_span(out, 15.0, 25.0, 1.0, 3).is_err());
    }

    #[test]
    fn ppg_and_ecg_share_beat_clock() {
        let spec = SynthSpec {
            ppg_offset_s: 0.0,
            ecg_offset_s: 0.0,
            ..tiny_spec()
        };
        let (rec, truth) = generate(&spec, 5).unwrap();
        // The ECG R spike sits on the beat; the PPG peak follows within the
        // same beat. Check the ECG argmax near each truth beat.
        let ecg = rec.ecg.samples();
        let fs = rec.ecg.fs();
        for &b in truth.beat_times.iter().take(5) {
            let i0 = ((b - 0.1) * fs).max(0.0) as usize;
            let i1 = (((b + 0.1) * fs) as usize).min(ecg.len());
            let (arg, _) = ecg[i0..i1]
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap();
            let t_spike = (i0 + arg) as f64 / fs;
            assert!((t_spike - b).abs() <= 1.0 / fs + 1e-9);
        }
    }
}
