//! CSV serialization for signals and HR series.
//!
//! Signals: `timestamp_s,value` rows at uniform spacing.
//! HR series: `window_start_s,hr_bpm,valid` rows; invalid windows carry an
//! empty value field.

use std::path::Path;

use super::{HRSeries, Signal1D};
use crate::{Error, Result};

pub fn write_signal_csv(sig: &Signal1D, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path.display(), e))?;
    w.write_record(["timestamp_s", "value"])
        .map_err(|e| Error::csv(path.display(), e))?;
    // Default float formatting is shortest-exact, so values survive the trip.
    for (i, &v) in sig.samples().iter().enumerate() {
        w.write_record([format!("{:.9}", sig.time_at(i)), format!("{v}")])
            .map_err(|e| Error::csv(path.display(), e))?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn read_signal_csv(path: &Path) -> Result<Signal1D> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path.display(), e))?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::csv(path.display(), e))?;
        if rec.len() < 2 {
            return Err(Error::csv(path.display(), "expected 2 columns"));
        }
        times.push(parse_f64(&rec[0], path)?);
        values.push(parse_f64(&rec[1], path)?);
    }
    if times.len() < 2 {
        return Err(Error::csv(path.display(), "need at least 2 samples"));
    }
    // Infer fs from the median spacing and verify uniformity.
    let mut dts: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    dts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let dt = dts[dts.len() / 2];
    if dt <= 0.0 {
        return Err(Error::csv(path.display(), "non-increasing timestamps"));
    }
    for (i, w) in times.windows(2).enumerate() {
        if ((w[1] - w[0]) - dt).abs() > 0.01 * dt {
            return Err(Error::csv(
                path.display(),
                format!("non-uniform sampling near row {i}"),
            ));
        }
    }
    Signal1D::new(values, 1.0 / dt, times[0])
}

pub fn write_hr_csv(hr: &HRSeries, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path.display(), e))?;
    w.write_record(["window_start_s", "hr_bpm", "valid"])
        .map_err(|e| Error::csv(path.display(), e))?;
    for (i, &t) in hr.window_starts.iter().enumerate() {
        let (v, valid) = match hr.values_bpm[i] {
            Some(hr) => (format!("{hr:.6}"), "1"),
            None => (String::new(), "0"),
        };
        w.write_record([format!("{t:.6}"), v, valid.into()])
            .map_err(|e| Error::csv(path.display(), e))?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn read_hr_csv(path: &Path, window_s: f64) -> Result<HRSeries> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path.display(), e))?;
    let mut starts = Vec::new();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::csv(path.display(), e))?;
        if rec.len() < 3 {
            return Err(Error::csv(path.display(), "expected 3 columns"));
        }
        starts.push(parse_f64(&rec[0], path)?);
        let valid = &rec[2] == "1";
        values.push(if valid {
            Some(parse_f64(&rec[1], path)?)
        } else {
            None
        });
    }
    HRSeries::new(values, window_s, starts)
}

fn parse_f64(s: &str, path: &Path) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::csv(path.display(), format!("bad number {s:?}: {e}")))
}
