//! Analytic head-motion model: per-activity band-limited oscillation,
//! sharp synchronization bursts near both ends of the recording, and
//! optional high-frequency corruption bursts.
//!
//! The model is a closed-form function of time so every device can sample
//! the same motion on its own clock, which is what synchronization recovery
//! relies on.

use rand::Rng;

use crate::ingest::{ActivityAnnotation, ActivityLabel};

/// Relative motion intensity per activity. Ordering mirrors the observed
/// normalized magnitudes (video lowest, dancing highest).
pub fn activity_intensity(label: ActivityLabel) -> f64 {
    match label {
        ActivityLabel::Video => 0.0,
        ActivityLabel::Walking => 0.30,
        ActivityLabel::Office => 0.45,
        ActivityLabel::Kitchen => 0.54,
        ActivityLabel::Bike => 0.77,
        ActivityLabel::Dancing => 1.00,
    }
}

#[derive(Debug, Clone, Copy)]
struct SineComp {
    freq_hz: f64,
    amp: f64,
    phase: f64,
}

#[derive(Debug, Clone)]
struct SegmentMotion {
    start_s: f64,
    end_s: f64,
    intensity: f64,
    comps: [Vec<SineComp>; 3],
}

#[derive(Debug, Clone, Copy)]
pub struct BurstSpan {
    pub start_s: f64,
    pub end_s: f64,
    pub gain: f64,
}

#[derive(Debug, Clone)]
pub struct MotionModel {
    segments: Vec<SegmentMotion>,
    sync_bursts: Vec<(f64, f64)>, // (time, sign)
    corrupt: Vec<(BurstSpan, [SineComp; 3])>,
    scale: f64,
    duration_s: f64,
}

impl MotionModel {
    pub fn build<R: Rng>(
        activities: &[ActivityAnnotation],
        scale: f64,
        sync_pattern: bool,
        corrupt_spans: &[BurstSpan],
        rng: &mut R,
    ) -> Self {
        let duration_s = activities.last().map(|a| a.end_s).unwrap_or(0.0);
        let segments = activities
            .iter()
            .map(|seg| {
                let intensity = activity_intensity(seg.label);
                let comps = std::array::from_fn(|_| {
                    (0..6)
                        .map(|_| SineComp {
                            freq_hz: rng.gen_range(0.6..6.0),
                            amp: rng.gen_range(0.2..1.0),
                            phase: rng.gen_range(0.0..std::f64::consts::TAU),
                        })
                        .collect()
                });
                SegmentMotion {
                    start_s: seg.start_s,
                    end_s: seg.end_s,
                    intensity,
                    comps,
                }
            })
            .collect();

        let mut sync_bursts = Vec::new();
        if sync_pattern && duration_s > 8.0 {
            for (i, t) in [2.0, 2.4, 2.8].iter().enumerate() {
                sync_bursts.push((*t, if i % 2 == 0 { 1.0 } else { -1.0 }));
            }
            for (i, t) in [duration_s - 2.8, duration_s - 2.4, duration_s - 2.0]
                .iter()
                .enumerate()
            {
                sync_bursts.push((*t, if i % 2 == 0 { 1.0 } else { -1.0 }));
            }
        }

        let corrupt = corrupt_spans
            .iter()
            .map(|&span| {
                let comps = std::array::from_fn(|_| SineComp {
                    freq_hz: rng.gen_range(9.0..15.0),
                    amp: 1.0,
                    phase: rng.gen_range(0.0..std::f64::consts::TAU),
                });
                (span, comps)
            })
            .collect();

        Self {
            segments,
            sync_bursts,
            corrupt,
            scale,
            duration_s,
        }
    }

    pub fn duration_s(&self) -> f64 {
        self.duration_s
    }

    /// 3-axis acceleration at an arbitrary time on the reference clock.
    pub fn accel(&self, t: f64) -> [f64; 3] {
        let mut a = [0.0; 3];
        for seg in &self.segments {
            if t < seg.start_s - 0.5 || t > seg.end_s + 0.5 {
                continue;
            }
            let w = smooth_window(t, seg.start_s, seg.end_s, 0.5);
            if w == 0.0 {
                continue;
            }
            for (axis, comps) in seg.comps.iter().enumerate() {
                for c in comps {
                    a[axis] += w
                        * seg.intensity
                        * self.scale
                        * c.amp
                        * (std::f64::consts::TAU * c.freq_hz * t + c.phase).sin();
                }
            }
        }
        for &(tc, sign) in &self.sync_bursts {
            let g = sign * 6.0 * self.scale * (-0.5 * ((t - tc) / 0.03).powi(2)).exp();
            a[0] += g;
            a[1] -= g;
            a[2] += g;
        }
        for (span, comps) in &self.corrupt {
            let w = smooth_window(t, span.start_s, span.end_s, 0.2);
            if w == 0.0 {
                continue;
            }
            for (axis, c) in comps.iter().enumerate() {
                a[axis] += w
                    * span.gain
                    * 2.0
                    * self.scale
                    * (std::f64::consts::TAU * c.freq_hz * t + c.phase).sin();
            }
        }
        a
    }

    /// Slowly varying motion envelope driving the specular term.
    pub fn intensity_at(&self, t: f64) -> f64 {
        let mut v = 0.0;
        for seg in &self.segments {
            let w = smooth_window(t, seg.start_s, seg.end_s, 0.5);
            v += w * seg.intensity;
        }
        for (span, _) in &self.corrupt {
            v += smooth_window(t, span.start_s, span.end_s, 0.2) * span.gain;
        }
        v * self.scale
    }

    /// Envelope of corruption bursts only (zero outside corrupt spans).
    pub fn corrupt_envelope(&self, t: f64) -> f64 {
        self.corrupt
            .iter()
            .map(|(span, _)| smooth_window(t, span.start_s, span.end_s, 0.2) * span.gain)
            .fold(0.0, f64::max)
    }
}

/// Cosine-ramp window: 0 outside [start, end], 1 inside, smooth ramps of
/// `ramp` seconds at both edges.
fn smooth_window(t: f64, start: f64, end: f64, ramp: f64) -> f64 {
    if t <= start - ramp || t >= end + ramp {
        return 0.0;
    }
    let up = ((t - start) / ramp + 1.0).clamp(0.0, 1.0);
    let down = ((end - t) / ramp + 1.0).clamp(0.0, 1.0);
    let smooth = |x: f64| 0.5 - 0.5 * (std::f64::consts::PI * x).cos();
    smooth(up) * smooth(down)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn annotations() -> Vec<ActivityAnnotation> {
        vec![
            ActivityAnnotation {
                label: ActivityLabel::Video,
                start_s: 0.0,
                end_s: 30.0,
            },
            ActivityAnnotation {
                label: ActivityLabel::Dancing,
                start_s: 30.0,
                end_s: 60.0,
            },
        ]
    }

    #[test]
    fn video_segment_is_still_dancing_is_not() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let m = MotionModel::build(&annotations(), 1.0, false, &[], &mut rng);
        let quiet = m.accel(15.0);
        assert!(quiet.iter().all(|v| v.abs() < 1e-9));
        let busy = m.accel(45.0);
        assert!(busy.iter().any(|v| v.abs() > 0.05));
    }

    #[test]
    fn sync_bursts_dominate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let m = MotionModel::build(&annotations(), 1.0, true, &[], &mut rng);
        let at_burst = m.accel(2.0)[0].abs();
        assert!(at_burst > 4.0, "burst amplitude {at_burst}");
    }

    #[test]
    fn corrupt_span_raises_magnitude() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let span = BurstSpan {
            start_s: 10.0,
            end_s: 12.0,
            gain: 1.5,
        };
        let m = MotionModel::build(&annotations(), 1.0, false, &[span], &mut rng);
        assert!(m.corrupt_envelope(11.0) > 1.0);
        assert_eq!(m.corrupt_envelope(20.0), 0.0);
        assert!(m.accel(11.0).iter().any(|v| v.abs() > 0.5));
    }
}
