//! 1-D signal types and operations: filtering, peak detection, heart-rate
//! derivation, and evaluation metrics.
//!
//! Everything in this module is pure and stateless; operations may be called
//! from multiple threads on distinct inputs.

mod filter;
mod hr;
mod io;
mod metrics;
mod peaks;

pub use filter::{bandpass_butterworth, bandpass_sos, filtfilt_sos, sos_frequency_response, Biquad};
pub use hr::{hr_from_peaks, hr_from_peaks_sliding, hr_from_waveform};
pub use io::{read_hr_csv, read_signal_csv, write_hr_csv, write_signal_csv};
pub use metrics::{align_windows, compute_metrics};
pub use peaks::detect_peaks;

use crate::{Error, Result};

/// Plausible heart-rate band in bpm; windows outside it are flagged invalid.
pub const HR_PLAUSIBLE_BPM: (f64, f64) = (30.0, 220.0);

/// Default peak-detection HR bounds. The 0.5-2.8 Hz analysis band
/// corresponds to 30-168 bpm.
pub const DEFAULT_MIN_HR_BPM: f64 = 30.0;
pub const DEFAULT_MAX_HR_BPM: f64 = 168.0;

/// A uniformly sampled real-valued signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D {
    samples: Vec<f64>,
    fs: f64,
    t0: f64,
}

impl Signal1D {
    /// Build a signal, validating sampling rate, finiteness, and length.
    pub fn new(samples: Vec<f64>, fs: f64, t0: f64) -> Result<Self> {
        if !(fs > 0.0) || !fs.is_finite() {
            return Err(Error::InvalidSignal(format!("fs must be positive, got {fs}")));
        }
        if samples.is_empty() {
            return Err(Error::InvalidSignal("empty sample buffer".into()));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!(
                "non-finite sample at index {i}: {}",
                samples[i]
            )));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidSignal(format!("non-finite t0: {t0}")));
        }
        Ok(Self { samples, fs, t0 })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    /// Timestamp of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        self.t0 + i as f64 / self.fs
    }

    /// Replace the sample buffer, keeping fs and t0. Length must match.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != self.samples.len() {
            return Err(Error::InvalidSignal(format!(
                "replacement length {} != original {}",
                samples.len(),
                self.samples.len()
            )));
        }
        Signal1D::new(samples, self.fs, self.t0)
    }

    /// Linear interpolation at arbitrary timestamps. Clamps to the ends.
    pub fn sample_at_times(&self, times: &[f64]) -> Vec<f64> {
        times
            .iter()
            .map(|&t| {
                let x = (t - self.t0) * self.fs;
                if x <= 0.0 {
                    self.samples[0]
                } else if x >= (self.samples.len() - 1) as f64 {
                    *self.samples.last().unwrap()
                } else {
                    let i = x.floor() as usize;
                    let frac = x - i as f64;
                    self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
                }
            })
            .collect()
    }

    /// Extract the sub-signal covering `[start_s, end_s)` in absolute time.
    pub fn slice_time(&self, start_s: f64, end_s: f64) -> Result<Signal1D> {
        let i0 = (((start_s - self.t0) * self.fs).ceil().max(0.0)) as usize;
        let i1 = ((((end_s - self.t0) * self.fs).floor()) as usize).min(self.samples.len());
        if i0 >= i1 {
            return Err(Error::InvalidSignal(format!(
                "empty time slice [{start_s}, {end_s})"
            )));
        }
        Signal1D::new(self.samples[i0..i1].to_vec(), self.fs, self.time_at(i0))
    }
}

/// Heart-rate series over fixed windows. Invalid windows (too few beats, or
/// implausible rate) carry `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct HRSeries {
    /// Per-window HR in bpm; `None` marks an invalid window.
    pub values_bpm: Vec<Option<f64>>,
    /// Window length in seconds.
    pub window_s: f64,
    /// Start timestamp of each window, sorted ascending.
    pub window_starts: Vec<f64>,
}

impl HRSeries {
    pub fn new(values_bpm: Vec<Option<f64>>, window_s: f64, window_starts: Vec<f64>) -> Result<Self> {
        if values_bpm.len() != window_starts.len() {
            return Err(Error::InvalidSignal(format!(
                "HR values ({}) and window starts ({}) length mismatch",
                values_bpm.len(),
                window_starts.len()
            )));
        }
        if !(window_s > 0.0) {
            return Err(Error::InvalidSignal(format!(
                "window length must be positive, got {window_s}"
            )));
        }
        if window_starts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSignal("window starts must be strictly increasing".into()));
        }
        Ok(Self {
            values_bpm,
            window_s,
            window_starts,
        })
    }

    pub fn len(&self) -> usize {
        self.values_bpm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values_bpm.is_empty()
    }

    pub fn n_valid(&self) -> usize {
        self.values_bpm.iter().filter(|v| v.is_some()).count()
    }

    /// Iterate `(window_start, hr)` over valid windows only.
    pub fn valid_pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.window_starts
            .iter()
            .zip(self.values_bpm.iter())
            .filter_map(|(&t, v)| v.map(|hr| (t, hr)))
    }

    /// Restrict to windows fully inside `[start_s, end_s)`.
    pub fn restrict(&self, start_s: f64, end_s: f64) -> HRSeries {
        let mut values = Vec::new();
        let mut starts = Vec::new();
        for (i, &t) in self.window_starts.iter().enumerate() {
            if t >= start_s && t + self.window_s <= end_s {
                values.push(self.values_bpm[i]);
                starts.push(t);
            }
        }
        HRSeries {
            values_bpm: values,
            window_s: self.window_s,
            window_starts: starts,
        }
    }
}

/// HR agreement metrics over aligned valid windows.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MetricsReport {
    pub mae_bpm: f64,
    pub rmse_bpm: f64,
    pub mape_pct: f64,
    /// Defined only when at least two aligned windows exist and both series
    /// are non-constant.
    pub pearson_r: Option<f64>,
    pub n_windows: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_rejects_bad_inputs() {
        assert!(Signal1D::new(vec![], 10.0, 0.0).is_err());
        assert!(Signal1D::new(vec![1.0], 0.0, 0.0).is_err());
        assert!(Signal1D::new(vec![f64::NAN], 10.0, 0.0).is_err());
        assert!(Signal1D::new(vec![1.0, f64::INFINITY], 10.0, 0.0).is_err());
        assert!(Signal1D::new(vec![1.0, 2.0], 10.0, 0.0).is_ok());
    }

    #[test]
    fn slice_time_respects_bounds() {
        let s = Signal1D::new((0..100).map(|i| i as f64).collect(), 10.0, 5.0).unwrap();
        let sub = s.slice_time(6.0, 8.0).unwrap();
        assert_eq!(sub.len(), 20);
        assert_eq!(sub.t0(), 6.0);
        assert_eq!(sub.samples()[0], 10.0);
    }

    #[test]
    fn sample_at_times_interpolates() {
        let s = Signal1D::new(vec![0.0, 1.0, 2.0], 1.0, 0.0).unwrap();
        let v = s.sample_at_times(&[-1.0, 0.5, 1.25, 9.0]);
        assert_eq!(v, vec![0.0, 0.5, 1.25, 2.0]);
    }

    #[test]
    fn hr_series_invariants() {
        assert!(HRSeries::new(vec![Some(60.0)], 60.0, vec![0.0]).is_ok());
        assert!(HRSeries::new(vec![Some(60.0); 2], 60.0, vec![60.0, 0.0]).is_err());
        assert!(HRSeries::new(vec![Some(60.0)], 0.0, vec![0.0]).is_err());
    }
}
