//! Training-time clip augmentation: one geometric transform per clip applied
//! to every frame, labels untouched.
//!
//! The transforms mirror how headset fit varies across wearers: small
//! rotations for inclined frames, horizontal crops for shifted coverage, and
//! flips for mirrored eye geometry.

use ndarray::Array4;
use rand::Rng;

use super::Clip;

/// Rotation range in degrees.
pub const ROTATION_DEG: f64 = 20.0;
/// Minimum kept width fraction for the horizontal crop.
pub const MIN_CROP_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentParams {
    pub angle_deg: f64,
    pub crop_fraction: f64,
    pub flip_h: bool,
    pub flip_v: bool,
}

impl AugmentParams {
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        Self {
            angle_deg: rng.gen_range(-ROTATION_DEG..ROTATION_DEG),
            crop_fraction: rng.gen_range(MIN_CROP_FRACTION..1.0),
            flip_h: rng.gen_bool(0.5),
            flip_v: rng.gen_bool(0.5),
        }
    }

    pub const IDENTITY: AugmentParams = AugmentParams {
        angle_deg: 0.0,
        crop_fraction: 1.0,
        flip_h: false,
        flip_v: false,
    };
}

/// Apply rotation, horizontal crop (resized back to full width), and flips
/// to every frame of the clip. Shape and labels are preserved.
pub fn augment(clip: &Clip, params: AugmentParams) -> Clip {
    let (t_len, c, h, w) = clip.x.dim();
    debug_assert_eq!(c, 1);
    let theta = params.angle_deg.to_radians();
    let (sin_t, cos_t) = theta.sin_cos();
    let cx = (w as f64 - 1.0) / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    let crop_w = (params.crop_fraction * w as f64).max(1.0);
    let crop_x0 = (w as f64 - crop_w) / 2.0;

    let mut out = Array4::<f64>::zeros((t_len, 1, h, w));
    for t in 0..t_len {
        for oy in 0..h {
            for ox in 0..w {
                // Invert the output pipeline: flips, then crop scaling, then
                // rotation, landing on input coordinates.
                let mut x = ox as f64;
                let mut y = oy as f64;
                if params.flip_h {
                    x = (w - 1) as f64 - x;
                }
                if params.flip_v {
                    y = (h - 1) as f64 - y;
                }
                let x = crop_x0 + x * (crop_w - 1.0).max(0.0) / (w as f64 - 1.0);
                // Rotate by -theta around the frame center.
                let dx = x - cx;
                let dy = y - cy;
                let sx = cx + cos_t * dx + sin_t * dy;
                let sy = cy - sin_t * dx + cos_t * dy;
                out[[t, 0, oy, ox]] = bilinear_at(&clip.x, t, sy, sx, h, w);
            }
        }
    }
    Clip {
        x: out,
        imu: clip.imu.clone(),
        y: clip.y.clone(),
        meta: clip.meta.clone(),
    }
}

fn bilinear_at(x: &Array4<f64>, t: usize, fy: f64, fx: f64, h: usize, w: usize) -> f64 {
    if fy < 0.0 || fx < 0.0 || fy > (h - 1) as f64 || fx > (w - 1) as f64 {
        return 0.0;
    }
    let y0 = fy.floor() as usize;
    let x0 = fx.floor() as usize;
    let y1 = (y0 + 1).min(h - 1);
    let x1 = (x0 + 1).min(w - 1);
    let wy = fy - y0 as f64;
    let wx = fx - x0 as f64;
    (1.0 - wy) * (1.0 - wx) * x[[t, 0, y0, x0]]
        + (1.0 - wy) * wx * x[[t, 0, y0, x1]]
        + wy * (1.0 - wx) * x[[t, 0, y1, x0]]
        + wy * wx * x[[t, 0, y1, x1]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::ActivityLabel;
    use crate::preprocess::ClipMeta;
    use ndarray::{Array1, Array2};

    fn clip(h: usize, w: usize) -> Clip {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        Clip {
            x: Array4::from_shape_fn((6, 1, h, w), |_| rng.gen_range(-1.0..1.0)),
            imu: Array2::zeros((6, 1)),
            y: Array1::from_vec((0..6).map(|i| i as f64).collect()),
            meta: ClipMeta {
                participant: "p".into(),
                activity: ActivityLabel::Office,
                window_start_s: 0.0,
                clip_index: 0,
            },
        }
    }

    #[test]
    fn shape_and_labels_preserved() {
        use rand::SeedableRng;
        let c = clip(12, 20);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let p = AugmentParams::sample(&mut rng);
            assert!(p.angle_deg.abs() <= ROTATION_DEG);
            assert!(p.crop_fraction >= MIN_CROP_FRACTION && p.crop_fraction <= 1.0);
            let a = augment(&c, p);
            assert_eq!(a.x.dim(), c.x.dim());
            assert_eq!(a.y, c.y);
            assert_eq!(a.imu, c.imu);
        }
    }

    #[test]
    fn identity_params_reproduce_input() {
        let c = clip(10, 16);
        let a = augment(&c, AugmentParams::IDENTITY);
        for (u, v) in a.x.iter().zip(c.x.iter()) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn double_horizontal_flip_is_identity() {
        let c = clip(10, 16);
        let flip = AugmentParams {
            flip_h: true,
            ..AugmentParams::IDENTITY
        };
        let once = augment(&c, flip);
        let twice = augment(&once, flip);
        for (u, v) in twice.x.iter().zip(c.x.iter()) {
            assert!((u - v).abs() < 1e-12);
        }
    }
}
