//! On-disk clip cache: one trio of .npy tensors per clip plus an index CSV.

use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2, Array4};

use crate::ingest::ActivityLabel;
use crate::npy::{read_npy_f64, write_npy_f64};
use crate::{Error, Result};

use super::{Clip, ClipMeta};

pub const INDEX_FILE: &str = "index.csv";

/// Write clips under `dir`: `<participant>_<index>.{x,imu,y}.npy` plus
/// `index.csv` with one row per clip.
pub fn write_clips(dir: &Path, clips: &[Clip]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display(), e))?;
    let index_path = dir.join(INDEX_FILE);
    let mut index =
        csv::Writer::from_path(&index_path).map_err(|e| Error::csv(index_path.display(), e))?;
    index
        .write_record(["participant", "activity", "window_start_s", "path"])
        .map_err(|e| Error::csv(index_path.display(), e))?;

    for clip in clips {
        let stem = format!("{}_{:06}", clip.meta.participant, clip.meta.clip_index);
        let (t, c, h, w) = clip.x.dim();
        write_npy_f64(
            &dir.join(format!("{stem}.x.npy")),
            &[t, c, h, w],
            clip.x.as_slice().expect("contiguous"),
        )?;
        write_npy_f64(
            &dir.join(format!("{stem}.imu.npy")),
            &[t, 1],
            clip.imu.as_slice().expect("contiguous"),
        )?;
        write_npy_f64(
            &dir.join(format!("{stem}.y.npy")),
            &[t],
            clip.y.as_slice().expect("contiguous"),
        )?;
        index
            .write_record([
                clip.meta.participant.clone(),
                clip.meta.activity.as_str().to_string(),
                format!("{}", clip.meta.window_start_s),
                stem,
            ])
            .map_err(|e| Error::csv(index_path.display(), e))?;
    }
    index
        .flush()
        .map_err(|e| Error::io(index_path.display(), e))
}

/// Entry of the clip index, cheap to filter before loading tensors.
#[derive(Debug, Clone)]
pub struct ClipIndexEntry {
    pub participant: String,
    pub activity: ActivityLabel,
    pub window_start_s: f64,
    pub path: PathBuf,
}

pub fn read_index(dir: &Path) -> Result<Vec<ClipIndexEntry>> {
    let index_path = dir.join(INDEX_FILE);
    let mut r =
        csv::Reader::from_path(&index_path).map_err(|e| Error::csv(index_path.display(), e))?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::csv(index_path.display(), e))?;
        if rec.len() < 4 {
            return Err(Error::csv(index_path.display(), "expected 4 columns"));
        }
        out.push(ClipIndexEntry {
            participant: rec[0].to_string(),
            activity: ActivityLabel::parse(&rec[1])?,
            window_start_s: rec[2]
                .parse()
                .map_err(|e| Error::csv(index_path.display(), format!("bad start: {e}")))?,
            path: dir.join(&rec[3]),
        });
    }
    Ok(out)
}

/// Load one clip from its index entry.
pub fn load_clip(entry: &ClipIndexEntry, clip_index: usize) -> Result<Clip> {
    let stem = entry.path.display();
    let (xs, xd) = read_npy_f64(&entry.path.with_extension("x.npy"))?;
    if xs.len() != 4 {
        return Err(Error::ShapeMismatch(format!("{stem}: x must be 4-d")));
    }
    let x = Array4::from_shape_vec((xs[0], xs[1], xs[2], xs[3]), xd)
        .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    let (is, id) = read_npy_f64(&entry.path.with_extension("imu.npy"))?;
    let imu = Array2::from_shape_vec((is[0], is[1]), id)
        .map_err(|e| Error::ShapeMismatch(e.to_string()))?;
    let (_, yd) = read_npy_f64(&entry.path.with_extension("y.npy"))?;
    let y = Array1::from_vec(yd);
    Ok(Clip {
        x,
        imu,
        y,
        meta: ClipMeta {
            participant: entry.participant.clone(),
            activity: entry.activity,
            window_start_s: entry.window_start_s,
            clip_index,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{Array1, Array2, Array4};

    #[test]
    fn roundtrip_preserves_tensors_and_meta() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let clips: Vec<Clip> = (0..3)
            .map(|i| Clip {
                x: Array4::from_shape_fn((8, 1, 4, 6), |_| rng.gen_range(-2.0..2.0)),
                imu: Array2::from_shape_fn((8, 1), |_| rng.gen_range(-1.0..1.0)),
                y: Array1::from_shape_fn(8, |_| rng.gen_range(-1.0..1.0)),
                meta: ClipMeta {
                    participant: "p7".into(),
                    activity: ActivityLabel::Kitchen,
                    window_start_s: i as f64 * 4.27,
                    clip_index: i,
                },
            })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        write_clips(dir.path(), &clips).unwrap();
        let index = read_index(dir.path()).unwrap();
        assert_eq!(index.len(), 3);
        for (i, entry) in index.iter().enumerate() {
            let back = load_clip(entry, i).unwrap();
            assert_eq!(back.x, clips[i].x);
            assert_eq!(back.imu, clips[i].imu);
            assert_eq!(back.y, clips[i].y);
            assert_eq!(back.meta.activity, ActivityLabel::Kitchen);
        }
    }
}
