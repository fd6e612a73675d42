//! Per-frame motion magnitude from the 3-axis head IMU.

use std::collections::BTreeMap;

use crate::signal::Signal1D;
use crate::{Error, Result};

use super::types::{ActivityLabel, Imu3, SyncedRecording};

/// Per-frame motion magnitude: the RMS, over each frame interval, of the
/// summed per-axis absolute sample differences of the IMU. Values are raw
/// (not dataset-normalized); see [`normalize_activity_magnitudes`].
pub fn motion_magnitude(imu: &Imu3, frame_times: &[f64]) -> Result<Signal1D> {
    if frame_times.len() < 2 {
        return Err(Error::InsufficientData("need at least 2 frames".into()));
    }
    let diffs = imu.abs_diff_sum();
    let ds = diffs.samples();
    let fs_imu = diffs.fs();
    let t0 = diffs.t0();
    let frame_dt = frame_times[1] - frame_times[0];

    let mut out = Vec::with_capacity(frame_times.len());
    let mut prev = 0.0;
    for (k, &ft) in frame_times.iter().enumerate() {
        let end = frame_times.get(k + 1).copied().unwrap_or(ft + frame_dt);
        let i0 = (((ft - t0) * fs_imu).ceil().max(0.0)) as usize;
        let i1 = ((((end - t0) * fs_imu).ceil()).max(0.0) as usize).min(ds.len());
        let v = if i0 < i1 {
            let ss: f64 = ds[i0..i1].iter().map(|d| d * d).sum();
            (ss / (i1 - i0) as f64).sqrt()
        } else {
            prev // IMU slower than video: carry the last estimate
        };
        out.push(v);
        prev = v;
    }
    Signal1D::new(out, 1.0 / frame_dt, frame_times[0])
}

/// Mean motion magnitude per activity over a set of synced recordings.
pub fn activity_magnitude_means(
    recordings: &[&SyncedRecording],
) -> BTreeMap<ActivityLabel, f64> {
    let mut sums: BTreeMap<ActivityLabel, (f64, usize)> = BTreeMap::new();
    for rec in recordings {
        let mags = rec.imu_mag.samples();
        for seg in &rec.activities {
            let i0 = ((seg.start_s - rec.imu_mag.t0()) * rec.imu_mag.fs()).max(0.0) as usize;
            let i1 = (((seg.end_s - rec.imu_mag.t0()) * rec.imu_mag.fs()) as usize).min(mags.len());
            let entry = sums.entry(seg.label).or_insert((0.0, 0));
            for &m in &mags[i0..i1] {
                entry.0 += m;
                entry.1 += 1;
            }
        }
    }
    sums.into_iter()
        .filter(|(_, (_, n))| *n > 0)
        .map(|(label, (s, n))| (label, s / n as f64))
        .collect()
}

/// Min-max normalize per-activity means to [0, 1] across the dataset: the
/// stillest activity maps to 0, the most active to 1.
pub fn normalize_activity_magnitudes(
    means: &BTreeMap<ActivityLabel, f64>,
) -> BTreeMap<ActivityLabel, f64> {
    let lo = means.values().copied().fold(f64::INFINITY, f64::min);
    let hi = means.values().copied().fold(f64::NEG_INFINITY, f64::max);
    means
        .iter()
        .map(|(&label, &v)| {
            let norm = if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
            (label, norm)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn imu_from(xs: Vec<f64>, ys: Vec<f64>, zs: Vec<f64>, fs: f64) -> Imu3 {
        Imu3::new(
            Signal1D::new(xs, fs, 0.0).unwrap(),
            Signal1D::new(ys, fs, 0.0).unwrap(),
            Signal1D::new(zs, fs, 0.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn constant_imu_gives_zero_magnitude() {
        let imu = imu_from(vec![1.0; 200], vec![-2.0; 200], vec![0.5; 200], 100.0);
        let times: Vec<f64> = (0..30).map(|i| i as f64 / 30.0).collect();
        let mag = motion_magnitude(&imu, &times).unwrap();
        assert!(mag.samples().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sign_flip_invariance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let xs: Vec<f64> = (0..300).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let ys: Vec<f64> = (0..300).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let zs: Vec<f64> = (0..300).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let times: Vec<f64> = (0..60).map(|i| i as f64 / 20.0).collect();
        let base = motion_magnitude(&imu_from(xs.clone(), ys.clone(), zs.clone(), 100.0), &times)
            .unwrap();
        let flipped = motion_magnitude(
            &imu_from(xs.iter().map(|v| -v).collect(), ys, zs, 100.0),
            &times,
        )
        .unwrap();
        assert_eq!(base.samples(), flipped.samples());
    }

    #[test]
    fn normalization_maps_extremes() {
        let means = BTreeMap::from([
            (ActivityLabel::Video, 0.01),
            (ActivityLabel::Walking, 0.3),
            (ActivityLabel::Dancing, 1.2),
        ]);
        let norm = normalize_activity_magnitudes(&means);
        assert_eq!(norm[&ActivityLabel::Video], 0.0);
        assert_eq!(norm[&ActivityLabel::Dancing], 1.0);
        assert!(norm[&ActivityLabel::Walking] > 0.0 && norm[&ActivityLabel::Walking] < 1.0);
    }
}
