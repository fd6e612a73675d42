//! Beat scheduling and pulse/ECG waveform templates.

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Target heart-rate profile over the recording.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HrProfile {
    Constant { bpm: f64 },
    /// Linear ramp over the whole recording.
    Ramp { from_bpm: f64, to_bpm: f64 },
    /// Slow sinusoidal drift around a base rate.
    Sine {
        base_bpm: f64,
        amp_bpm: f64,
        period_s: f64,
    },
    /// Piecewise-constant plateaus: (start_s, bpm), sorted by start.
    Steps { steps: Vec<(f64, f64)> },
}

impl HrProfile {
    /// Instantaneous rate in bpm, clamped to the generator's allowed band.
    pub fn bpm_at(&self, t: f64, duration_s: f64) -> f64 {
        let raw = match self {
            HrProfile::Constant { bpm } => *bpm,
            HrProfile::Ramp { from_bpm, to_bpm } => {
                let a = (t / duration_s).clamp(0.0, 1.0);
                from_bpm + a * (to_bpm - from_bpm)
            }
            HrProfile::Sine {
                base_bpm,
                amp_bpm,
                period_s,
            } => base_bpm + amp_bpm * (2.0 * std::f64::consts::PI * t / period_s).sin(),
            HrProfile::Steps { steps } => {
                let mut bpm = steps.first().map(|s| s.1).unwrap_or(70.0);
                for &(start, v) in steps {
                    if t >= start {
                        bpm = v;
                    }
                }
                bpm
            }
        };
        raw.clamp(40.0, 180.0)
    }
}

/// Generate beat onset times following the HR profile, with optional
/// fractional inter-beat jitter.
pub fn schedule_beats<R: Rng>(
    profile: &HrProfile,
    duration_s: f64,
    jitter: f64,
    rng: &mut R,
) -> Vec<f64> {
    let mut beats = Vec::new();
    let mut t = 0.15 * 60.0 / profile.bpm_at(0.0, duration_s);
    while t < duration_s {
        beats.push(t);
        let ibi = 60.0 / profile.bpm_at(t, duration_s);
        let j: f64 = if jitter > 0.0 {
            rng.gen_range(-jitter..jitter)
        } else {
            0.0
        };
        t += ibi * (1.0 + j);
    }
    beats
}

/// Blood-volume-pulse template over one beat phase in [0, 1): fast systolic
/// rise peaking at phase 0.25, slow diastolic decay. Smooth and zero at both
/// ends so concatenated beats are C1.
pub fn pulse_template(phase: f64) -> f64 {
    if !(0.0..1.0).contains(&phase) {
        return 0.0;
    }
    // phi^2 (1-phi)^6, normalized to unit peak at phi = 1/4.
    const NORM: f64 = 0.011123657226562502;
    phase * phase * (1.0 - phase).powi(6) / NORM
}

/// Continuous pulse waveform from a beat schedule. The phase within each
/// inter-beat interval drives the template, so variable rates stretch beats.
pub fn pulse_value(beats: &[f64], t: f64) -> f64 {
    if beats.len() < 2 {
        return 0.0;
    }
    let k = match beats.binary_search_by(|b| b.partial_cmp(&t).unwrap()) {
        Ok(i) => i,
        Err(0) => return 0.0,
        Err(i) => i - 1,
    };
    if k + 1 >= beats.len() {
        // After the last beat: reuse the previous interval length.
        let ibi = beats[k] - beats[k - 1];
        return pulse_template((t - beats[k]) / ibi);
    }
    let phase = (t - beats[k]) / (beats[k + 1] - beats[k]);
    pulse_template(phase)
}

/// ECG-like waveform: narrow R spike at each beat onset with small Q/S dips
/// and a T bump, so an R-peak detector on a 5-30 Hz band finds the onsets.
pub fn ecg_value(beats: &[f64], t: f64) -> f64 {
    let gauss = |dt: f64, sigma: f64| (-0.5 * (dt / sigma).powi(2)).exp();
    let mut v = 0.0;
    // Only the two nearest beats contribute materially.
    let idx = match beats.binary_search_by(|b| b.partial_cmp(&t).unwrap()) {
        Ok(i) => i,
        Err(i) => i,
    };
    let lo = idx.saturating_sub(2);
    let hi = (idx + 2).min(beats.len());
    for &b in &beats[lo..hi] {
        let dt = t - b;
        v += gauss(dt, 0.008);
        v -= 0.15 * gauss(dt + 0.025, 0.010);
        v -= 0.15 * gauss(dt - 0.025, 0.010);
        v += 0.25 * gauss(dt - 0.18, 0.05);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn constant_profile_yields_constant_ibi() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let beats = schedule_beats(&HrProfile::Constant { bpm: 72.0 }, 60.0, 0.0, &mut rng);
        let ibis: Vec<f64> = beats.windows(2).map(|w| w[1] - w[0]).collect();
        for ibi in &ibis {
            assert!((ibi - 60.0 / 72.0).abs() < 1e-12);
        }
        // ~72 beats in a minute.
        assert!((beats.len() as i64 - 72).unsigned_abs() <= 1);
    }

    #[test]
    fn jittered_beats_average_to_profile() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // 0.8 s nominal interval (75 bpm), +-5% jitter.
        let beats = schedule_beats(&HrProfile::Constant { bpm: 75.0 }, 300.0, 0.05, &mut rng);
        let mean_ibi: f64 =
            beats.windows(2).map(|w| w[1] - w[0]).sum::<f64>() / (beats.len() - 1) as f64;
        assert!(
            (mean_ibi - 0.8).abs() < 0.008,
            "mean interval {mean_ibi} not within 1% of 0.8 s"
        );
    }

    #[test]
    fn template_peaks_once_per_beat() {
        assert_eq!(pulse_template(0.0), 0.0);
        assert!(pulse_template(0.25) > 0.999 && pulse_template(0.25) <= 1.0);
        assert!(pulse_template(0.25) > pulse_template(0.1));
        assert!(pulse_template(0.25) > pulse_template(0.6));
        // Asymmetry: rises faster than it decays.
        assert!(pulse_template(0.15) > pulse_template(0.5));
    }

    #[test]
    fn clamps_profile_to_band() {
        let p = HrProfile::Ramp {
            from_bpm: 10.0,
            to_bpm: 300.0,
        };
        assert_eq!(p.bpm_at(0.0, 100.0), 40.0);
        assert_eq!(p.bpm_at(100.0, 100.0), 180.0);
    }

    #[test]
    fn ecg_spikes_at_beats() {
        let beats = vec![1.0, 2.0, 3.0];
        assert!(ecg_value(&beats, 2.0) > 0.9);
        assert!(ecg_value(&beats, 2.5).abs() < 0.1);
    }
}
