//! Contact-PPG quality validation against the ECG reference, and the
//! per-task exclusion rule.

use crate::signal::{
    bandpass_butterworth, detect_peaks, hr_from_peaks_sliding, HRSeries, Signal1D,
};
use crate::Result;

use super::types::SyncedRecording;

/// Tasks whose PPG-vs-ECG HR MAE exceeds this are excluded from training.
pub const EXCLUSION_THRESHOLD_BPM: f64 = 3.0;

/// ECG R-peak detection band (Hz) and filter order.
pub const ECG_BAND_HZ: (f64, f64) = (5.0, 30.0);
const ECG_MAX_HR_BPM: f64 = 220.0;

/// Pulse-wave analysis band (Hz) shared with the estimation pipeline.
pub const BVP_BAND_HZ: (f64, f64) = (0.5, 2.8);

/// Sliding-window HR from an ECG trace: 5-30 Hz bandpass, R-peak detection,
/// HR per `window_s` window sliding by `slide_s`.
pub fn ecg_heart_rate(ecg: &Signal1D, window_s: f64, slide_s: f64) -> Result<HRSeries> {
    let filtered = bandpass_butterworth(ecg, ECG_BAND_HZ.0, ECG_BAND_HZ.1, 4)?;
    let peaks = detect_peaks(&filtered, 30.0, ECG_MAX_HR_BPM)?;
    hr_from_peaks_sliding(&peaks, ecg.fs(), window_s, slide_s, ecg.len(), ecg.t0())
}

/// Sliding-window HR from a contact PPG trace through the pulse band.
pub fn ppg_heart_rate(ppg: &Signal1D, window_s: f64, slide_s: f64) -> Result<HRSeries> {
    let filtered = bandpass_butterworth(ppg, BVP_BAND_HZ.0, BVP_BAND_HZ.1, 4)?;
    let peaks = detect_peaks(&filtered, 30.0, 200.0)?;
    hr_from_peaks_sliding(&peaks, ppg.fs(), window_s, slide_s, ppg.len(), ppg.t0())
}

/// Compare PPG-derived and ECG-derived HR over one task segment.
/// Returns the MAE (when any valid aligned windows exist) and the exclusion
/// decision: excluded iff MAE exceeds the threshold, or nothing aligned.
pub fn validate_ppg_task(
    ppg_hr: &HRSeries,
    ecg_hr: &HRSeries,
    threshold_bpm: f64,
) -> (Option<f64>, bool) {
    let pairs = crate::signal::align_windows(ppg_hr, ecg_hr);
    if pairs.is_empty() {
        return (None, true);
    }
    let mae = pairs.iter().map(|(p, g)| (p - g).abs()).sum::<f64>() / pairs.len() as f64;
    (Some(mae), mae > threshold_bpm)
}

/// Validation outcome for one activity segment.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TaskValidation {
    pub participant: String,
    pub label: super::types::ActivityLabel,
    pub start_s: f64,
    pub end_s: f64,
    pub mae_bpm: Option<f64>,
    pub excluded: bool,
}

/// Run the exclusion rule over every activity segment of a synced recording,
/// marking excluded segments in place.
pub fn apply_exclusion_rule(
    rec: &mut SyncedRecording,
    window_s: f64,
    slide_s: f64,
    threshold_bpm: f64,
) -> Result<Vec<TaskValidation>> {
    let ppg_hr_all = ppg_heart_rate(&rec.ppg, window_s, slide_s)?;
    let ecg_hr_all = ecg_heart_rate(&rec.ecg, window_s, slide_s)?;

    let mut report = Vec::with_capacity(rec.activities.len());
    for seg in &mut rec.activities {
        let ppg_seg = ppg_hr_all.restrict(seg.start_s, seg.end_s);
        let ecg_seg = ecg_hr_all.restrict(seg.start_s, seg.end_s);
        let (mae, excluded) = if ppg_seg.is_empty() || ecg_seg.is_empty() {
            // Segment shorter than one window: judge by the windows that
            // overlap it instead of excluding outright.
            let ppg_seg = ppg_hr_all.restrict(seg.start_s - window_s, seg.end_s + window_s);
            let ecg_seg = ecg_hr_all.restrict(seg.start_s - window_s, seg.end_s + window_s);
            validate_ppg_task(&ppg_seg, &ecg_seg, threshold_bpm)
        } else {
            validate_ppg_task(&ppg_seg, &ecg_seg, threshold_bpm)
        };
        seg.excluded = excluded;
        seg.exclusion_mae_bpm = mae;
        report.push(TaskValidation {
            participant: rec.participant.clone(),
            label: seg.label,
            start_s: seg.start_s,
            end_s: seg.end_s,
            mae_bpm: mae,
            excluded,
        });
    }
    Ok(report)
}
