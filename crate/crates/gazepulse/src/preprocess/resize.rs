//! Bilinear frame resizing to the model resolution.

use ndarray::Array2;

use crate::{Error, Result};

/// Bilinear resize of a grayscale frame to `(out_h, out_w)`, producing
/// intensities on the [0, 1] scale. Pixel centers are aligned
/// (half-pixel convention), so a same-size resize is the identity.
pub fn resize_frame(frame: &Array2<u8>, out_h: usize, out_w: usize) -> Result<Array2<f64>> {
    let (in_h, in_w) = frame.dim();
    if in_h == 0 || in_w == 0 || out_h == 0 || out_w == 0 {
        return Err(Error::InvalidRecording("zero-size frame in resize".into()));
    }
    let sy = in_h as f64 / out_h as f64;
    let sx = in_w as f64 / out_w as f64;
    let mut out = Array2::<f64>::zeros((out_h, out_w));
    for oy in 0..out_h {
        let fy = ((oy as f64 + 0.5) * sy - 0.5).clamp(0.0, (in_h - 1) as f64);
        let y0 = fy.floor() as usize;
        let y1 = (y0 + 1).min(in_h - 1);
        let wy = fy - y0 as f64;
        for ox in 0..out_w {
            let fx = ((ox as f64 + 0.5) * sx - 0.5).clamp(0.0, (in_w - 1) as f64);
            let x0 = fx.floor() as usize;
            let x1 = (x0 + 1).min(in_w - 1);
            let wx = fx - x0 as f64;
            let v = (1.0 - wy) * (1.0 - wx) * frame[[y0, x0]] as f64
                + (1.0 - wy) * wx * frame[[y0, x1]] as f64
                + wy * (1.0 - wx) * frame[[y1, x0]] as f64
                + wy * wx * frame[[y1, x1]] as f64;
            out[[oy, ox]] = v / 255.0;
        }
    }
    Ok(out)
}

/// Resize a whole frame sequence; parallel across frames.
pub fn to_model_frames(frames: &[Array2<u8>], out_h: usize, out_w: usize) -> Result<Vec<Array2<f64>>> {
    crate::par::map_collect(frames.len(), |i| resize_frame(&frames[i], out_h, out_w))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_frame_stays_constant() {
        let frame = Array2::<u8>::from_elem((240, 320), 137);
        let out = resize_frame(&frame, 48, 128).unwrap();
        for &v in out.iter() {
            assert!((v - 137.0 / 255.0).abs() < 1e-12);
        }
    }

    #[test]
    fn same_size_is_identity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let frame = Array2::<u8>::from_shape_fn((48, 128), |_| rng.gen());
        let out = resize_frame(&frame, 48, 128).unwrap();
        for (o, &i) in out.iter().zip(frame.iter()) {
            assert_eq!(*o, i as f64 / 255.0);
        }
    }

    #[test]
    fn checkerboard_mean_preserved() {
        let frame = Array2::<u8>::from_shape_fn((240, 320), |(y, x)| {
            if (x + y) % 2 == 0 {
                255
            } else {
                0
            }
        });
        let in_mean = frame.iter().map(|&v| v as f64 / 255.0).sum::<f64>() / frame.len() as f64;
        let out = resize_frame(&frame, 48, 128).unwrap();
        let out_mean = out.sum() / out.len() as f64;
        assert!(
            (out_mean - in_mean).abs() <= 0.01,
            "mean {out_mean} vs {in_mean}"
        );
    }

    #[test]
    fn zero_size_rejected() {
        let frame = Array2::<u8>::from_elem((4, 4), 1);
        assert!(resize_frame(&frame, 0, 10).is_err());
    }
}
