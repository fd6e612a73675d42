//! Write a generated recording to disk in exactly the layout the ingestion
//! loaders consume, making synthetic data a drop-in dataset substitute.

use std::path::Path;

use crate::ingest::{
    write_activities_csv, write_frame_png, write_imu_csv, write_manifest, RawRecording,
};
use crate::signal::write_signal_csv;
use crate::{Error, Result};

use super::GroundTruth;

pub const GROUND_TRUTH_FILE: &str = "ground_truth.json";

/// Write `rec` (and its ground truth, when given) under `dir`.
pub fn write_recording(rec: &RawRecording, truth: Option<&GroundTruth>, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display(), e))?;
    let frames_dir = dir.join(&rec.manifest.video.path);
    std::fs::create_dir_all(&frames_dir).map_err(|e| Error::io(frames_dir.display(), e))?;

    let results: Vec<Result<()>> = crate::par::map_collect(rec.video.frames.len(), |i| {
        let path = frames_dir.join(format!("frame_{i:06}.png"));
        write_frame_png(&rec.video.frames[i], &path)
    });
    results.into_iter().collect::<Result<Vec<()>>>()?;

    write_imu_csv(&rec.imu_head, &dir.join(&rec.manifest.imu_head_csv))?;
    write_signal_csv(&rec.ppg, &dir.join(&rec.manifest.ppg.csv))?;
    write_signal_csv(&rec.ecg, &dir.join(&rec.manifest.ecg.csv))?;
    if let (Some(rel), Some(imu)) = (&rec.manifest.ppg.imu_csv, rec.device_imus.get("ppg")) {
        write_imu_csv(imu, &dir.join(rel))?;
    }
    if let (Some(rel), Some(imu)) = (&rec.manifest.ecg.imu_csv, rec.device_imus.get("ecg")) {
        write_imu_csv(imu, &dir.join(rel))?;
    }
    write_activities_csv(&rec.activities, &dir.join(&rec.manifest.activities_csv))?;
    write_manifest(&rec.manifest, dir)?;

    if let Some(truth) = truth {
        let path = dir.join(GROUND_TRUTH_FILE);
        let text = serde_json::to_string_pretty(truth)?;
        std::fs::write(&path, text).map_err(|e| Error::io(path.display(), e))?;
    }
    Ok(())
}

/// Load a ground-truth sidecar written next to a synthetic recording.
pub fn read_ground_truth(dir: &Path) -> Result<GroundTruth> {
    let path = dir.join(GROUND_TRUTH_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(path.display(), e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::super::{generate, ActivityPlan, SynthSpec};
    use super::*;
    use crate::ingest::{load_recording, ActivityLabel};

    #[test]
    fn disk_roundtrip_is_lossless() {
        let spec = SynthSpec {
            frame_h: 24,
            frame_w: 32,
            activities: vec![ActivityPlan {
                label: ActivityLabel::Office,
                duration_s: 12.0,
            }],
            imu_fs: 50.0,
            ecg_fs: 256.0,
            ..SynthSpec::default()
        };
        let (rec, truth) = generate(&spec, 9).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_recording(&rec, Some(&truth), dir.path()).unwrap();
        let back = load_recording(dir.path()).unwrap();

        assert_eq!(back.video.frames, rec.video.frames);
        assert_eq!(back.video.fps, rec.video.fps);
        assert_eq!(back.ppg.samples(), rec.ppg.samples());
        assert_eq!(back.ecg.samples(), rec.ecg.samples());
        assert_eq!(back.imu_head.x.samples(), rec.imu_head.x.samples());
        assert_eq!(
            back.device_imus["ppg"].y.samples(),
            rec.device_imus["ppg"].y.samples()
        );
        assert_eq!(back.activities, rec.activities);

        let truth_back = read_ground_truth(dir.path()).unwrap();
        assert_eq!(truth_back.beat_times, truth.beat_times);
    }

    #[test]
    fn mp4_rejected_with_clear_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("video.mp4");
        std::fs::write(&path, b"not a real container").unwrap();
        let err = crate::ingest::load_video(&path, 30.0).unwrap_err();
        assert!(err.to_string().contains("external decoder"), "{err}");
    }
}
