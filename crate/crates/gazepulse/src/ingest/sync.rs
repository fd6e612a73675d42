//! Cross-device synchronization via IMU pattern cross-correlation.
//!
//! Every body-worn device records the same physical motion, so the summed
//! absolute-difference magnitude of its accelerometer correlates sharply with
//! the headset trace wherever the sync pattern (or any motion) is present.
//! Offsets are estimated at a start and an end anchor; a linear clock model
//! between them absorbs drift.

use std::collections::BTreeMap;

use crate::signal::Signal1D;
use crate::{Error, Result};

use super::motion::motion_magnitude;
use super::types::*;

/// Minimum normalized correlation for a believable sync lock.
pub const SYNC_CORRELATION_MIN: f64 = 0.3;

/// Maximum device offset searched, seconds.
pub const SYNC_MAX_OFFSET_S: f64 = 2.0;

/// Synchronize all streams of a raw recording onto the video clock.
///
/// Devices with a companion IMU get offset/drift estimated; devices without
/// one are assumed pre-aligned (offset 0, correlation reported as 1).
pub fn sync_streams(raw: &RawRecording) -> Result<SyncedRecording> {
    raw.validate()?;
    let ref_mag = raw.imu_head.abs_diff_sum();

    let mut alignments = BTreeMap::new();
    for name in ["ppg", "ecg"] {
        let alignment = match raw.device_imus.get(name) {
            Some(imu) => estimate_alignment(&ref_mag, &imu.abs_diff_sum())
                .map_err(|e| Error::SyncNotFound(format!("{name}: {e}")))?,
            None => ClockAlignment {
                offset_start_s: 0.0,
                offset_end_s: 0.0,
                anchor_start_s: 0.0,
                anchor_end_s: ref_mag.duration_s(),
                correlation: 1.0,
                residual_s: f64::NAN,
            },
        };
        alignments.insert(name.to_string(), alignment);
    }

    let ppg = retime(&raw.ppg, &alignments["ppg"])?;
    let ecg = retime(&raw.ecg, &alignments["ecg"])?;
    let imu_mag = motion_magnitude(&raw.imu_head, &raw.video.frame_times())?;

    let activities = raw
        .activities
        .iter()
        .map(|a| ActivitySegment {
            label: a.label,
            start_s: a.start_s,
            end_s: a.end_s,
            excluded: false,
            exclusion_mae_bpm: None,
        })
        .collect();

    Ok(SyncedRecording {
        participant: raw.manifest.participant.clone(),
        video: raw.video.clone(),
        imu_mag,
        ppg,
        ecg,
        activities,
        alignments,
    })
}

/// Estimate the device-to-reference clock alignment from two IMU magnitude
/// traces. Errors when the correlation peak is too weak ("sync not found").
pub fn estimate_alignment(ref_mag: &Signal1D, dev_mag: &Signal1D) -> Result<ClockAlignment> {
    let fs = ref_mag.fs();
    // Resample the device trace onto the reference rate if it differs.
    let dev = if (dev_mag.fs() - fs).abs() > 1e-9 {
        let n = (dev_mag.duration_s() * fs).floor() as usize;
        let times: Vec<f64> = (0..n).map(|i| dev_mag.t0() + i as f64 / fs).collect();
        Signal1D::new(dev_mag.sample_at_times(&times), fs, dev_mag.t0())?
    } else {
        dev_mag.clone()
    };

    let max_lag = (SYNC_MAX_OFFSET_S * fs).ceil() as isize;
    let (coarse_lag, corr) = best_lag(ref_mag.samples(), dev.samples(), -max_lag, max_lag)?;
    if corr < SYNC_CORRELATION_MIN {
        return Err(Error::SyncNotFound(format!(
            "correlation peak {corr:.3} below {SYNC_CORRELATION_MIN}"
        )));
    }

    // Refine at both anchors over a small extra lag range.
    let dur = ref_mag.duration_s();
    let anchor_w = (8.0f64).min(dur / 3.0);
    let refine = (0.5 * fs).ceil() as isize;
    let n_anchor = (anchor_w * fs) as usize;
    let ref_s = ref_mag.samples();

    let mut anchor_offsets = Vec::new();
    for (a0, label) in [(0usize, "start"), (ref_s.len().saturating_sub(n_anchor), "end")] {
        let seg = &ref_s[a0..(a0 + n_anchor).min(ref_s.len())];
        let (lag, c) = best_lag_windowed(seg, dev.samples(), a0 as isize, coarse_lag, refine)?;
        if c < SYNC_CORRELATION_MIN {
            return Err(Error::SyncNotFound(format!(
                "{label} anchor correlation {c:.3} below {SYNC_CORRELATION_MIN}"
            )));
        }
        anchor_offsets.push((a0 as f64 / fs, lag / fs));
    }

    Ok(ClockAlignment {
        offset_start_s: anchor_offsets[0].1 + (ref_mag.t0() - dev_mag.t0()),
        offset_end_s: anchor_offsets[1].1 + (ref_mag.t0() - dev_mag.t0()),
        anchor_start_s: anchor_offsets[0].0,
        anchor_end_s: anchor_offsets[1].0,
        correlation: corr,
        residual_s: 1.0 / fs,
    })
}

/// Best integer lag of `b` relative to `a` by normalized correlation, with a
/// parabolic sub-sample refinement. A positive lag means `b` is delayed:
/// b[i] aligns with a[i + lag].
fn best_lag(a: &[f64], b: &[f64], lo: isize, hi: isize) -> Result<(f64, f64)> {
    let mut best = (0isize, f64::NEG_INFINITY);
    let mut scores = BTreeMap::new();
    for lag in lo..=hi {
        let c = ncc_at_lag(a, b, lag, 0);
        scores.insert(lag, c);
        if c > best.1 {
            best = (lag, c);
        }
    }
    if !best.1.is_finite() {
        return Err(Error::SyncNotFound("no overlap or zero-variance traces".into()));
    }
    let refined = parabolic(best.0, &scores);
    Ok((refined, best.1))
}

/// As `best_lag`, but `a` is a window of the reference starting at sample
/// `a_start`, and lags are searched around `center`.
fn best_lag_windowed(
    a: &[f64],
    b: &[f64],
    a_start: isize,
    center: f64,
    radius: isize,
) -> Result<(f64, f64)> {
    let c0 = center.round() as isize;
    let mut best = (c0, f64::NEG_INFINITY);
    let mut scores = BTreeMap::new();
    for d in -radius..=radius {
        let lag = c0 + d;
        let c = ncc_at_lag(a, b, lag, a_start);
        scores.insert(lag, c);
        if c > best.1 {
            best = (lag, c);
        }
    }
    if !best.1.is_finite() {
        return Err(Error::SyncNotFound("anchor window had no usable overlap".into()));
    }
    Ok((parabolic(best.0, &scores), best.1))
}

/// Pearson correlation between a[i] and b[i + a_start - lag] over the overlap.
fn ncc_at_lag(a: &[f64], b: &[f64], lag: isize, a_start: isize) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, &av) in a.iter().enumerate() {
        let j = i as isize + a_start - lag;
        if j >= 0 && (j as usize) < b.len() {
            xs.push(av);
            ys.push(b[j as usize]);
        }
    }
    let n = xs.len();
    if n < 16 {
        return f64::NEG_INFINITY;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for k in 0..n {
        let dx = xs[k] - mx;
        let dy = ys[k] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx <= 0.0 || vy <= 0.0 {
        return f64::NEG_INFINITY;
    }
    cov / (vx.sqrt() * vy.sqrt())
}

/// Parabolic interpolation of the correlation peak for sub-sample lags.
fn parabolic(peak: isize, scores: &BTreeMap<isize, f64>) -> f64 {
    let (Some(&ym), Some(&y0), Some(&yp)) = (
        scores.get(&(peak - 1)),
        scores.get(&peak),
        scores.get(&(peak + 1)),
    ) else {
        return peak as f64;
    };
    if !(ym.is_finite() && yp.is_finite()) {
        return peak as f64;
    }
    let denom = ym - 2.0 * y0 + yp;
    if denom.abs() < 1e-12 {
        return peak as f64;
    }
    let delta = 0.5 * (ym - yp) / denom;
    peak as f64 + delta.clamp(-1.0, 1.0)
}

/// Resample a device-clock signal onto a uniform reference-clock grid using
/// the estimated alignment.
fn retime(sig: &Signal1D, alignment: &ClockAlignment) -> Result<Signal1D> {
    let fs = sig.fs();
    let t0_ref = alignment.to_reference(sig.t0());
    // Invert the linear clock model per output sample.
    let span = alignment.anchor_end_s - alignment.anchor_start_s;
    let slope = if span.abs() < 1e-9 {
        0.0
    } else {
        (alignment.offset_end_s - alignment.offset_start_s) / span
    };
    let device_times: Vec<f64> = (0..sig.len())
        .map(|i| {
            let tr = t0_ref + i as f64 / fs;
            // Solve tr = d + offset_start + slope * (d - anchor_start).
            (tr - alignment.offset_start_s + slope * alignment.anchor_start_s) / (1.0 + slope)
        })
        .collect();
    Signal1D::new(sig.sample_at_times(&device_times), fs, t0_ref)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn bursty_trace(fs: f64, dur: f64, offset: f64, seed: u64) -> Signal1D {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = (fs * dur) as usize;
        let bursts = [2.0, 2.4, 2.8, dur - 2.8, dur - 2.4, dur - 2.0];
        let samples: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / fs - offset;
                let mut v = 0.02 * rng.gen::<f64>();
                for &b in &bursts {
                    v += (-0.5 * ((t - b) / 0.03).powi(2)).exp();
                }
                v
            })
            .collect();
        Signal1D::new(samples, fs, 0.0).unwrap()
    }

    #[test]
    fn recovers_known_delay() {
        let fs = 100.0;
        let a = bursty_trace(fs, 60.0, 0.0, 1);
        let same_clock = bursty_trace(fs, 60.0, 0.0, 2);
        let al = estimate_alignment(&a, &same_clock).unwrap();
        assert!(al.offset_start_s.abs() < 0.01, "{al:?}");

        // Device started 1.2 s late: its pattern sits 1.2 s earlier in its
        // own buffer, and the estimator reports reference-minus-device +1.2.
        let dev = bursty_trace(fs, 60.0, -1.2, 5);
        let al = estimate_alignment(&a, &dev).unwrap();
        assert!(
            (al.offset_start_s - 1.2).abs() <= 0.01,
            "recovered {}",
            al.offset_start_s
        );
        assert!(
            (al.offset_end_s - 1.2).abs() <= 0.02,
            "end anchor {}",
            al.offset_end_s
        );
    }

    #[test]
    fn zero_motion_has_no_sync() {
        let a = Signal1D::new(vec![0.0; 3000], 100.0, 0.0).unwrap();
        let b = Signal1D::new(vec![0.0; 3000], 100.0, 0.0).unwrap();
        assert!(matches!(
            estimate_alignment(&a, &b),
            Err(Error::SyncNotFound(_))
        ));
    }

    #[test]
    fn already_synced_streams_report_tiny_offset() {
        let fs = 100.0;
        let a = bursty_trace(fs, 40.0, 0.0, 7);
        let al = estimate_alignment(&a, &a.clone()).unwrap();
        assert!(al.offset_start_s.abs() < 1.0 / fs, "{al:?}");
        assert!(al.offset_end_s.abs() < 1.0 / fs);
        assert!(al.correlation > 0.99);
    }
}
