//! Heart-rate derivation from detected peaks.

use super::{HRSeries, Signal1D, HR_PLAUSIBLE_BPM};
use crate::{Error, Result};

/// HR per non-overlapping window: 60 / mean inter-beat interval of the beats
/// inside the window. Windows with fewer than two beats, or a rate outside
/// the plausible band, are flagged invalid. The trailing partial window is
/// dropped.
pub fn hr_from_peaks(
    peaks: &[usize],
    fs: f64,
    window_s: f64,
    total_len: usize,
    t0: f64,
) -> Result<HRSeries> {
    if !(window_s > 0.0) {
        return Err(Error::InvalidSignal(format!(
            "window length must be positive, got {window_s}"
        )));
    }
    if peaks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSignal("peak indices must be strictly increasing".into()));
    }
    let total_s = total_len as f64 / fs;
    let n_windows = (total_s / window_s).floor() as usize;

    let times: Vec<f64> = peaks.iter().map(|&p| p as f64 / fs).collect();
    let mut values = Vec::with_capacity(n_windows);
    let mut starts = Vec::with_capacity(n_windows);
    for w in 0..n_windows {
        let (ws, we) = (w as f64 * window_s, (w + 1) as f64 * window_s);
        values.push(window_hr(&times, ws, we));
        starts.push(t0 + ws);
    }
    HRSeries::new(values, window_s, starts)
}

/// HR over sliding windows spaced `slide_s` apart (windows may overlap).
/// Used by sensor cross-validation where a fine-grained trace is wanted.
pub fn hr_from_peaks_sliding(
    peaks: &[usize],
    fs: f64,
    window_s: f64,
    slide_s: f64,
    total_len: usize,
    t0: f64,
) -> Result<HRSeries> {
    if !(window_s > 0.0 && slide_s > 0.0) {
        return Err(Error::InvalidSignal(
            "window and slide must be positive".into(),
        ));
    }
    let total_s = total_len as f64 / fs;
    if total_s < window_s {
        return Err(Error::InsufficientData(format!(
            "signal shorter ({total_s:.1}s) than one window ({window_s}s)"
        )));
    }
    let times: Vec<f64> = peaks.iter().map(|&p| p as f64 / fs).collect();
    let n_windows = ((total_s - window_s) / slide_s).floor() as usize + 1;
    let mut values = Vec::with_capacity(n_windows);
    let mut starts = Vec::with_capacity(n_windows);
    for w in 0..n_windows {
        let ws = w as f64 * slide_s;
        values.push(window_hr(&times, ws, ws + window_s));
        starts.push(t0 + ws);
    }
    // Sliding windows still have strictly increasing starts.
    HRSeries::new(values, window_s, starts)
}

fn window_hr(peak_times: &[f64], start_s: f64, end_s: f64) -> Option<f64> {
    let inside: Vec<f64> = peak_times
        .iter()
        .copied()
        .filter(|&t| t >= start_s && t < end_s)
        .collect();
    if inside.len() < 2 {
        return None;
    }
    let mean_ibi = (inside.last().unwrap() - inside[0]) / (inside.len() - 1) as f64;
    let hr = 60.0 / mean_ibi;
    (HR_PLAUSIBLE_BPM.0..=HR_PLAUSIBLE_BPM.1)
        .contains(&hr)
        .then_some(hr)
}

/// Convenience: bandpass a pulse waveform, detect peaks, derive windowed HR.
pub fn hr_from_waveform(
    bvp: &Signal1D,
    low_hz: f64,
    high_hz: f64,
    order: usize,
    min_hr_bpm: f64,
    max_hr_bpm: f64,
    window_s: f64,
) -> Result<HRSeries> {
    let filtered = super::bandpass_butterworth(bvp, low_hz, high_hz, order)?;
    let peaks = super::detect_peaks(&filtered, min_hr_bpm, max_hr_bpm)?;
    hr_from_peaks(&peaks, bvp.fs(), window_s, bvp.len(), bvp.t0())
}
