//! Peak detection for pulse waveforms: local maxima with a minimum-distance
//! constraint derived from the maximum plausible heart rate, and a relative
//! prominence floor so low-amplitude ripple is ignored.

use crate::{Error, Result};

use super::Signal1D;

/// Fraction of the signal standard deviation a peak's prominence must reach.
pub const PROMINENCE_STD_FRACTION: f64 = 0.3;

/// Detect beat peaks in a (bandpassed) pulse waveform.
///
/// The minimum inter-peak distance is `fs * 60 / max_hr_bpm` samples.
/// Candidates are strict local maxima (plateau midpoints), kept if their
/// prominence reaches `0.3 * std(signal)`, then thinned highest-first under
/// the distance constraint. Returns strictly increasing indices; empty on a
/// flat signal.
pub fn detect_peaks(bvp: &Signal1D, min_hr_bpm: f64, max_hr_bpm: f64) -> Result<Vec<usize>> {
    if !(min_hr_bpm > 0.0 && max_hr_bpm > min_hr_bpm) {
        return Err(Error::InvalidSignal(format!(
            "bad HR bounds [{min_hr_bpm}, {max_hr_bpm}]"
        )));
    }
    let x = bvp.samples();
    let n = x.len();
    if n < 3 {
        return Ok(Vec::new());
    }

    let mean = x.iter().sum::<f64>() / n as f64;
    let std = (x.iter().map(|&v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
    if std == 0.0 {
        return Ok(Vec::new());
    }
    let min_prominence = PROMINENCE_STD_FRACTION * std;

    // Local maxima with plateau handling: midpoint of each flat top.
    let mut candidates = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if x[i] > x[i - 1] {
            let mut j = i;
            while j < n - 1 && x[j + 1] == x[j] {
                j += 1;
            }
            if j < n - 1 && x[j + 1] < x[j] {
                candidates.push((i + j) / 2);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }

    // Prominence: drop to the lowest point on each side before a higher
    // summit (or the edge); prominence = height - max(left_min, right_min).
    let prominent: Vec<usize> = candidates
        .into_iter()
        .filter(|&p| {
            let h = x[p];
            let mut left_min = h;
            let mut k = p;
            while k > 0 {
                k -= 1;
                if x[k] > h {
                    break;
                }
                left_min = left_min.min(x[k]);
            }
            let mut right_min = h;
            let mut k = p;
            while k < n - 1 {
                k += 1;
                if x[k] > h {
                    break;
                }
                right_min = right_min.min(x[k]);
            }
            h - left_min.max(right_min) >= min_prominence
        })
        .collect();

    // Enforce minimum distance, keeping higher peaks first.
    let min_dist = bvp.fs() * 60.0 / max_hr_bpm;
    let mut order: Vec<usize> = (0..prominent.len()).collect();
    order.sort_by(|&a, &b| {
        x[prominent[b]]
            .partial_cmp(&x[prominent[a]])
            .unwrap()
            .then(prominent[a].cmp(&prominent[b]))
    });
    let mut keep = vec![true; prominent.len()];
    for &oi in &order {
        if !keep[oi] {
            continue;
        }
        let p = prominent[oi] as f64;
        // Suppress lower neighbours within the exclusion radius.
        for (j, &q) in prominent.iter().enumerate() {
            if j != oi && keep[j] && (q as f64 - p).abs() < min_dist {
                keep[j] = false;
            }
        }
    }

    let peaks: Vec<usize> = prominent
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();
    Ok(peaks)
}
