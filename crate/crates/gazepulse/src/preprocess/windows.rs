//! Windowing preprocessed recordings into fixed-length model clips.

use ndarray::{Array1, Array2, Array4};
use serde::{Deserialize, Serialize};

use crate::ingest::{ActivityLabel, ActivitySegment};
use crate::Result;

use super::PreprocessedRecording;

/// Identity of a clip inside the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipMeta {
    pub participant: String,
    pub activity: ActivityLabel,
    pub window_start_s: f64,
    pub clip_index: usize,
}

/// One model window: standardized frame differences, per-frame motion, and
/// difference-domain labels over the same `t_len` transitions.
#[derive(Debug, Clone)]
pub struct Clip {
    /// (T, 1, h, w)
    pub x: Array4<f64>,
    /// (T, 1)
    pub imu: Array2<f64>,
    /// (T)
    pub y: Array1<f64>,
    pub meta: ClipMeta,
}

impl Clip {
    pub fn t_len(&self) -> usize {
        self.x.dim().0
    }

    pub fn spatial(&self) -> (usize, usize) {
        let d = self.x.dim();
        (d.2, d.3)
    }
}

/// Cut non-overlapping `t_len`-transition clips inside every included
/// activity segment. Clips never span a segment boundary; the trailing
/// remainder of each segment is dropped; segments too short for one clip
/// contribute none.
pub fn window_clips(rec: &PreprocessedRecording, t_len: usize) -> Result<Vec<Clip>> {
    let fps = rec.fps;
    let n_frames = rec.frames.len();
    let mut clips = Vec::new();
    let mut clip_index = 0usize;

    for seg in rec.segments.iter().filter(|s| !s.excluded) {
        let first_frame = (seg.start_s * fps).ceil() as usize;
        let end_frame = ((seg.end_s * fps).floor() as usize).min(n_frames);
        if end_frame <= first_frame + t_len {
            // Not even one clip fits (t_len transitions need t_len+1 frames).
            continue;
        }
        // Transition t uses frames (t, t+1); keep all transitions inside.
        let mut offset = first_frame;
        while offset + t_len + 1 <= end_frame {
            clips.push(cut_clip(rec, seg, offset, t_len, clip_index)?);
            clip_index += 1;
            offset += t_len;
        }
    }
    Ok(clips)
}

fn cut_clip(
    rec: &PreprocessedRecording,
    seg: &ActivitySegment,
    frame_offset: usize,
    t_len: usize,
    clip_index: usize,
) -> Result<Clip> {
    let (h, w) = rec.frames[0].dim();
    let mut x = Array4::<f64>::zeros((t_len, 1, h, w));
    for t in 0..t_len {
        let a = &rec.frames[frame_offset + t];
        let b = &rec.frames[frame_offset + t + 1];
        for y in 0..h {
            for xx in 0..w {
                x[[t, 0, y, xx]] = (b[[y, xx]] - a[[y, xx]]) / rec.diff_std;
            }
        }
    }
    let mut imu = Array2::<f64>::zeros((t_len, 1));
    let mut yv = Array1::<f64>::zeros(t_len);
    for t in 0..t_len {
        imu[[t, 0]] = rec.imu_standardized[frame_offset + t];
        yv[t] = rec.labels[frame_offset + t];
    }
    Ok(Clip {
        x,
        imu,
        y: yv,
        meta: ClipMeta {
            participant: rec.participant.clone(),
            activity: seg.label,
            window_start_s: frame_offset as f64 / rec.fps,
            clip_index,
        },
    })
}
