//! HR agreement metrics between a predicted and a reference series.

use super::{HRSeries, MetricsReport};
use crate::{Error, Result};

/// Pair up windows of two series by start timestamp. Windows missing from
/// either side, or invalid on either side, are excluded pairwise. The match
/// tolerance is half the finer start spacing, so overlapping sliding series
/// pair one-to-one as well.
pub fn align_windows(pred: &HRSeries, gt: &HRSeries) -> Vec<(f64, f64)> {
    let spacing = |s: &HRSeries| {
        if s.window_starts.len() >= 2 {
            s.window_starts
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min)
        } else {
            s.window_s
        }
    };
    let tol = 0.5 * spacing(pred).min(spacing(gt));
    let mut pairs = Vec::new();
    let mut j = 0;
    for (tp, vp) in pred.valid_pairs() {
        while j < gt.window_starts.len() && gt.window_starts[j] < tp - tol {
            j += 1;
        }
        if j < gt.window_starts.len() && (gt.window_starts[j] - tp).abs() <= tol {
            if let Some(vg) = gt.values_bpm[j] {
                pairs.push((vp, vg));
            }
        }
    }
    pairs
}

/// MAE / RMSE / MAPE / Pearson r over aligned valid windows.
pub fn compute_metrics(pred: &HRSeries, gt: &HRSeries) -> Result<MetricsReport> {
    let pairs = align_windows(pred, gt);
    metrics_from_pairs(&pairs)
}

/// Metrics from already-aligned (prediction, reference) pairs.
pub fn metrics_from_pairs(pairs: &[(f64, f64)]) -> Result<MetricsReport> {
    let n = pairs.len();
    if n == 0 {
        return Err(Error::NoAlignedWindows);
    }
    let nf = n as f64;
    let mae = pairs.iter().map(|(p, g)| (p - g).abs()).sum::<f64>() / nf;
    let rmse = (pairs.iter().map(|(p, g)| (p - g).powi(2)).sum::<f64>() / nf).sqrt();
    let mape = pairs
        .iter()
        .map(|(p, g)| ((p - g) / g).abs())
        .sum::<f64>()
        / nf
        * 100.0;

    let pearson_r = if n >= 2 {
        let mp = pairs.iter().map(|(p, _)| p).sum::<f64>() / nf;
        let mg = pairs.iter().map(|(_, g)| g).sum::<f64>() / nf;
        let cov = pairs
            .iter()
            .map(|(p, g)| (p - mp) * (g - mg))
            .sum::<f64>();
        let vp = pairs.iter().map(|(p, _)| (p - mp).powi(2)).sum::<f64>();
        let vg = pairs.iter().map(|(_, g)| (g - mg).powi(2)).sum::<f64>();
        if vp > 0.0 && vg > 0.0 {
            Some((cov / (vp.sqrt() * vg.sqrt())).clamp(-1.0, 1.0))
        } else {
            None
        }
    } else {
        None
    };

    Ok(MetricsReport {
        mae_bpm: mae,
        rmse_bpm: rmse,
        mape_pct: mape,
        pearson_r,
        n_windows: n,
    })
}
