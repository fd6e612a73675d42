//! Recording loaders and on-disk formats.
//!
//! A recording directory holds a `manifest.json`, a frame directory of
//! numbered grayscale PNGs (or an .mp4, which this build rejects with a
//! structured error), sensor CSVs, and an activity CSV.

use std::path::{Path, PathBuf};

use ndarray::Array2;

use crate::signal::{read_signal_csv, Signal1D};
use crate::{Error, Result};

use super::types::*;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Load a full recording from `dir/manifest.json`.
pub fn load_recording(dir: &Path) -> Result<RawRecording> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&manifest_path)
        .map_err(|e| Error::io(manifest_path.display(), e))?;
    let manifest: RecordingManifest = serde_json::from_str(&text)?;

    let video = load_video(&dir.join(&manifest.video.path), manifest.video.fps)?;
    let imu_head = read_imu_csv(&dir.join(&manifest.imu_head_csv))?;
    let ppg = read_signal_csv(&dir.join(&manifest.ppg.csv))?;
    let ecg = read_signal_csv(&dir.join(&manifest.ecg.csv))?;

    let mut device_imus = std::collections::BTreeMap::new();
    if let Some(p) = &manifest.ppg.imu_csv {
        device_imus.insert("ppg".to_string(), read_imu_csv(&dir.join(p))?);
    }
    if let Some(p) = &manifest.ecg.imu_csv {
        device_imus.insert("ecg".to_string(), read_imu_csv(&dir.join(p))?);
    }
    let activities = read_activities_csv(&dir.join(&manifest.activities_csv))?;

    let rec = RawRecording {
        manifest,
        video,
        imu_head,
        ppg,
        ecg,
        device_imus,
        activities,
    };
    rec.validate()?;
    Ok(rec)
}

/// Load a video: a directory of numbered grayscale PNG frames.
/// MP4 containers are recognized but need an external decoder, so they are
/// rejected with a clear error rather than silently skipped.
pub fn load_video(path: &Path, fps: f64) -> Result<VideoStream> {
    if path.extension().map(|e| e == "mp4").unwrap_or(false) {
        return Err(Error::InvalidRecording(format!(
            "{}: mp4 input requires an external decoder; extract frames to a PNG directory first",
            path.display()
        )));
    }
    if !path.is_dir() {
        return Err(Error::InvalidRecording(format!(
            "{} is not a frame directory",
            path.display()
        )));
    }
    let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(|e| Error::io(path.display(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "png").unwrap_or(false))
        .collect();
    entries.sort();
    if entries.is_empty() {
        return Err(Error::InvalidRecording(format!(
            "no PNG frames in {}",
            path.display()
        )));
    }
    let frames = crate::par::map_collect(entries.len(), |i| load_frame(&entries[i]));
    let frames: Result<Vec<Array2<u8>>> = frames.into_iter().collect();
    Ok(VideoStream { frames: frames?, fps })
}

fn load_frame(path: &Path) -> Result<Array2<u8>> {
    let img = image::open(path).map_err(|e| Error::Image {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    let gray = img.into_luma8();
    let (w, h) = gray.dimensions();
    Array2::from_shape_vec((h as usize, w as usize), gray.into_raw()).map_err(|e| Error::Image {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

pub fn write_frame_png(frame: &Array2<u8>, path: &Path) -> Result<()> {
    let (h, w) = frame.dim();
    let buf: Vec<u8> = frame.iter().copied().collect();
    let img = image::GrayImage::from_raw(w as u32, h as u32, buf).ok_or_else(|| Error::Image {
        path: path.display().to_string(),
        detail: "frame buffer size mismatch".into(),
    })?;
    img.save(path).map_err(|e| Error::Image {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

/// IMU CSV: `timestamp_s,ax,ay,az` at uniform spacing.
pub fn read_imu_csv(path: &Path) -> Result<Imu3> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path.display(), e))?;
    let mut times = Vec::new();
    let mut ax = Vec::new();
    let mut ay = Vec::new();
    let mut az = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::csv(path.display(), e))?;
        if rec.len() < 4 {
            return Err(Error::csv(path.display(), "expected 4 columns"));
        }
        let f = |i: usize| -> Result<f64> {
            rec[i]
                .trim()
                .parse()
                .map_err(|e| Error::csv(path.display(), format!("bad value: {e}")))
        };
        times.push(f(0)?);
        ax.push(f(1)?);
        ay.push(f(2)?);
        az.push(f(3)?);
    }
    if times.len() < 2 {
        return Err(Error::csv(path.display(), "need at least 2 samples"));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if dt <= 0.0 {
        return Err(Error::csv(path.display(), "non-increasing timestamps"));
    }
    let fs = 1.0 / dt;
    Imu3::new(
        Signal1D::new(ax, fs, times[0])?,
        Signal1D::new(ay, fs, times[0])?,
        Signal1D::new(az, fs, times[0])?,
    )
}

pub fn write_imu_csv(imu: &Imu3, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path.display(), e))?;
    w.write_record(["timestamp_s", "ax", "ay", "az"])
        .map_err(|e| Error::csv(path.display(), e))?;
    let (xs, ys, zs) = (imu.x.samples(), imu.y.samples(), imu.z.samples());
    for i in 0..imu.len() {
        w.write_record([
            format!("{:.9}", imu.x.time_at(i)),
            format!("{}", xs[i]),
            format!("{}", ys[i]),
            format!("{}", zs[i]),
        ])
        .map_err(|e| Error::csv(path.display(), e))?;
    }
    w.flush().map_err(|e| Error::io(path.display(), e))
}

/// Activities CSV: `label,start_s,end_s`.
pub fn read_activities_csv(path: &Path) -> Result<Vec<ActivityAnnotation>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path.display(), e))?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::csv(path.display(), e))?;
        if rec.len() < 3 {
            return Err(Error::csv(path.display(), "expected 3 columns"));
        }
        let parse = |i: usize| -> Result<f64> {
            rec[i]
                .trim()
                .parse()
                .map_err(|e| Error::csv(path.display(), format!("bad value: {e}")))
        };
        out.push(ActivityAnnotation {
            label: ActivityLabel::parse(rec[0].trim())?,
            start_s: parse(1)?,
            end_s: parse(2)?,
        });
    }
    Ok(out)
}

pub fn write_activities_csv(activities: &[ActivityAnnotation], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path.display(), e))?;
    w.write_record(["label", "start_s", "end_s"])
        .map_err(|e| Error::csv(path.display(), e))?;
    for a in activities {
        w.write_record([
            a.label.as_str().to_string(),
            format!("{}", a.start_s),
            format!("{}", a.end_s),
        ])
        .map_err(|e| Error::csv(path.display(), e))?;
    }
    w.flush().map_err(|e| Error::io(path.display(), e))
}

pub fn write_manifest(manifest: &RecordingManifest, dir: &Path) -> Result<()> {
    let path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(manifest)?;
    std::fs::write(&path, text).map_err(|e| Error::io(path.display(), e))
}
