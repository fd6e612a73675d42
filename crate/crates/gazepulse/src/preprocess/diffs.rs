//! Standardized frame differences and difference-domain labels.
//!
//! The model consumes consecutive frame differences divided by one
//! per-recording standard deviation, and regresses the equally standardized
//! first differences of the contact PPG resampled at frame times.

use ndarray::{Array2, Array3};

use crate::signal::Signal1D;
use crate::{Error, Result};

/// Reject recordings whose frame differences are essentially zero.
pub const MIN_DIFF_STD: f64 = 1e-6;

/// Pooled (population) standard deviation of all consecutive frame
/// differences of a recording.
pub fn frame_difference_std(frames: &[Array2<f64>]) -> Result<f64> {
    if frames.len() < 2 {
        return Err(Error::InsufficientData("need at least 2 frames".into()));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut count = 0usize;
    for pair in frames.windows(2) {
        for (a, b) in pair[0].iter().zip(pair[1].iter()) {
            let d = b - a;
            sum += d;
            sum_sq += d * d;
            count += 1;
        }
    }
    let mean = sum / count as f64;
    Ok((sum_sq / count as f64 - mean * mean).max(0.0).sqrt())
}

/// Consecutive frame differences divided by the recording std:
/// one `(1, h, w)` slice per transition, `frames.len() - 1` total.
pub fn standardized_frame_differences(
    frames: &[Array2<f64>],
    recording_std: f64,
) -> Result<Vec<Array3<f64>>> {
    if frames.len() < 2 {
        return Err(Error::InsufficientData("need at least 2 frames".into()));
    }
    if recording_std < MIN_DIFF_STD {
        return Err(Error::StaticVideo(recording_std));
    }
    let (h, w) = frames[0].dim();
    let out = crate::par::map_collect(frames.len() - 1, |t| {
        let mut d = Array3::<f64>::zeros((1, h, w));
        for y in 0..h {
            for x in 0..w {
                d[[0, y, x]] = (frames[t + 1][[y, x]] - frames[t][[y, x]]) / recording_std;
            }
        }
        d
    });
    Ok(out)
}

/// Standardized first differences of the PPG at frame times. Returns the
/// per-transition labels (length `frame_times.len() - 1`) and the divisor.
///
/// The divisor is the uncentered RMS of the differences, so a linear-ramp
/// PPG (constant nonzero differences) standardizes to constant labels and
/// only a genuinely flat PPG is rejected. Pulse differences have near-zero
/// mean, so RMS and std coincide in practice.
pub fn standardize_labels(ppg: &Signal1D, frame_times: &[f64]) -> Result<(Vec<f64>, f64)> {
    if frame_times.len() < 2 {
        return Err(Error::InsufficientData("need at least 2 frame times".into()));
    }
    let at_frames = ppg.sample_at_times(frame_times);
    let diffs: Vec<f64> = at_frames.windows(2).map(|w| w[1] - w[0]).collect();
    let n = diffs.len() as f64;
    let rms = (diffs.iter().map(|d| d * d).sum::<f64>() / n).sqrt();
    if rms < MIN_DIFF_STD {
        return Err(Error::StaticVideo(rms));
    }
    Ok((diffs.iter().map(|d| d / rms).collect(), rms))
}

/// Reconstruct a waveform from difference-domain values by cumulative sum.
/// Inverse of differencing up to the unknown first sample and global scale.
pub fn cumulative_reconstruction(diffs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(diffs.len() + 1);
    let mut acc = 0.0;
    out.push(acc);
    for d in diffs {
        acc += d;
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn const_frame(v: f64) -> Array2<f64> {
        Array2::from_elem((4, 6), v)
    }

    #[test]
    fn constant_video_rejected_at_recording_level() {
        let frames = vec![const_frame(0.5); 10];
        let std = frame_difference_std(&frames).unwrap();
        assert_eq!(std, 0.0);
        assert!(matches!(
            standardized_frame_differences(&frames, std),
            Err(Error::StaticVideo(_))
        ));
    }

    #[test]
    fn alternating_frames_alternate_sign() {
        let frames: Vec<Array2<f64>> = (0..9)
            .map(|i| const_frame(if i % 2 == 0 { 0.2 } else { 0.8 }))
            .collect();
        let std = frame_difference_std(&frames).unwrap();
        let diffs = standardized_frame_differences(&frames, std).unwrap();
        assert_eq!(diffs.len(), 8);
        // |b - a| / std = 1 for a pure alternation.
        for (t, d) in diffs.iter().enumerate() {
            let expect = if t % 2 == 0 { 1.0 } else { -1.0 };
            for &v in d.iter() {
                assert!((v - expect).abs() < 1e-9, "t={t} v={v}");
            }
        }
    }

    #[test]
    fn random_video_pooled_std_is_one() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let frames: Vec<Array2<f64>> = (0..50)
            .map(|_| Array2::from_shape_fn((8, 12), |_| rng.gen_range(0.0..1.0)))
            .collect();
        let std = frame_difference_std(&frames).unwrap();
        let diffs = standardized_frame_differences(&frames, std).unwrap();
        let flat: Vec<f64> = diffs.iter().flat_map(|d| d.iter().copied()).collect();
        let n = flat.len() as f64;
        let mean = flat.iter().sum::<f64>() / n;
        let pooled = (flat.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        assert!((pooled - 1.0).abs() < 1e-6, "pooled std {pooled}");
    }

    #[test]
    fn linear_ramp_ppg_gives_constant_labels() {
        let ppg = Signal1D::new((0..200).map(|i| 0.01 * i as f64).collect(), 20.0, 0.0).unwrap();
        let times: Vec<f64> = (0..100).map(|i| i as f64 / 10.0 + 0.01).collect();
        let (labels, _) = standardize_labels(&ppg, &times).unwrap();
        // Interior diffs are all equal; ends may clamp.
        let mid = &labels[1..labels.len() - 2];
        for v in mid {
            assert!((v - mid[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn sinusoid_labels_are_shifted_sinusoid() {
        let fs = 100.0;
        let f = 1.2;
        let ppg = Signal1D::new(
            (0..2000)
                .map(|i| (std::f64::consts::TAU * f * i as f64 / fs).sin())
                .collect(),
            fs,
            0.0,
        )
        .unwrap();
        let times: Vec<f64> = (0..600).map(|i| i as f64 / 30.0).collect();
        let (labels, _) = standardize_labels(&ppg, &times).unwrap();
        // diff of sin(2pi f t) sampled at rate r is a sinusoid of the same
        // frequency with a phase lead; correlate against the analytic form.
        let r = 30.0;
        let expect: Vec<f64> = (0..labels.len())
            .map(|i| {
                let t = i as f64 / r;
                (std::f64::consts::TAU * f * (t + 0.5 / r)).cos()
            })
            .collect();
        let dot: f64 = labels.iter().zip(&expect).map(|(a, b)| a * b).sum();
        let na: f64 = labels.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nb: f64 = expect.iter().map(|v| v * v).sum::<f64>().sqrt();
        let corr = dot / (na * nb);
        assert!(corr > 0.999, "correlation {corr}");
    }

    #[test]
    fn reconstruction_recovers_up_to_affine() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let fs = 128.0;
        let wave: Vec<f64> = (0..4000)
            .map(|i| {
                let t = i as f64 / fs;
                (std::f64::consts::TAU * 1.1 * t).sin() + 0.02 * rng.gen_range(-1.0..1.0)
            })
            .collect();
        let ppg = Signal1D::new(wave.clone(), fs, 0.0).unwrap();
        let times: Vec<f64> = (0..900).map(|i| i as f64 / 30.0).collect();
        let (labels, _) = standardize_labels(&ppg, &times).unwrap();
        let recon = cumulative_reconstruction(&labels);
        let original = ppg.sample_at_times(&times);
        // Pearson r between reconstruction and original >= 0.999.
        let n = recon.len().min(original.len()) as f64;
        let ma = recon.iter().sum::<f64>() / n;
        let mb = original.iter().sum::<f64>() / n;
        let mut cov = 0.0;
        let mut va = 0.0;
        let mut vb = 0.0;
        for (a, b) in recon.iter().zip(original.iter()) {
            cov += (a - ma) * (b - mb);
            va += (a - ma).powi(2);
            vb += (b - mb).powi(2);
        }
        let r = cov / (va.sqrt() * vb.sqrt());
        assert!(r >= 0.999, "reconstruction r = {r}");
    }
}
