//! Frame renderer for synthetic eye-camera video.
//!
//! Pixels follow the reflection decomposition: a static diffuse base plus a
//! pulse-scaled diffuse term, a motion-driven specular term shared across the
//! frame, and additive sensor noise. The eye region carries blink occlusions
//! and saccade jumps of a dark pupil, so it is pulsatile but artifact-heavy,
//! while the surrounding skin is the stable high-SNR source.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::geometry::Rect;

use super::motion::MotionModel;

const SKIN_BASE: f64 = 0.55;
const SCLERA_BASE: f64 = 0.40;
const PUPIL_BASE: f64 = 0.08;
const LID_BASE: f64 = 0.45;

#[derive(Debug, Clone)]
pub struct SceneModel {
    h: usize,
    w: usize,
    eye: Rect,
    skin: Rect,
    pulse_amplitude: f64,
    eye_pulse_fraction: f64,
    specular_amplitude: f64,
    noise_std: f64,
    blinks: Vec<(f64, f64)>,
    saccades: Vec<(f64, f64, f64)>, // (time, dx, dy), piecewise-constant
    frame_seed: u64,
}

impl SceneModel {
    #[allow(clippy::too_many_arguments)]
    pub fn build<R: Rng>(
        h: usize,
        w: usize,
        skin: Rect,
        eye: Rect,
        pulse_amplitude: f64,
        eye_pulse_fraction: f64,
        specular_amplitude: f64,
        noise_std: f64,
        duration_s: f64,
        motion: &MotionModel,
        frame_seed: u64,
        rng: &mut R,
    ) -> Self {
        // Blink schedule: ~0.25/s, 150-300 ms occlusions.
        let mut blinks = Vec::new();
        let mut t = 0.0;
        while t < duration_s {
            t += -rng.gen::<f64>().max(1e-12).ln() / 0.25;
            let dur = rng.gen_range(0.15..0.30);
            if t + dur < duration_s {
                blinks.push((t, t + dur));
            }
        }
        // Saccade schedule: rate rises with motion intensity.
        let mut saccades = vec![(0.0, 0.0, 0.0)];
        let max_dx = eye.width() as f64 / 6.0;
        let max_dy = eye.height() as f64 / 8.0;
        let mut t = 0.0;
        while t < duration_s {
            let rate = 0.4 + 1.5 * motion.intensity_at(t).min(2.0);
            t += -rng.gen::<f64>().max(1e-12).ln() / rate;
            saccades.push((
                t,
                rng.gen_range(-max_dx..max_dx),
                rng.gen_range(-max_dy..max_dy),
            ));
        }
        Self {
            h,
            w,
            eye,
            skin,
            pulse_amplitude,
            eye_pulse_fraction,
            specular_amplitude,
            noise_std,
            blinks,
            saccades,
            frame_seed,
        }
    }

    fn blinking(&self, t: f64) -> bool {
        self.blinks.iter().any(|&(a, b)| t >= a && t < b)
    }

    fn gaze_offset(&self, t: f64) -> (f64, f64) {
        let mut off = (0.0, 0.0);
        for &(ts, dx, dy) in &self.saccades {
            if ts > t {
                break;
            }
            off = (dx, dy);
        }
        off
    }

    /// Render frame `idx` at time `t` given the pulse value and motion model.
    pub fn render(&self, idx: usize, t: f64, pulse: f64, motion: &MotionModel) -> Array2<u8> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.frame_seed);
        rng.set_stream(idx as u64);
        let normal = Normal::new(0.0, 1.0).unwrap();

        let spec = self.specular_amplitude * motion.intensity_at(t);
        let corrupt = motion.corrupt_envelope(t);
        let wobble = 0.05 * corrupt * (std::f64::consts::TAU * 11.0 * t).sin();
        let blinking = self.blinking(t);
        let (gx, gy) = self.gaze_offset(t);
        let pupil_cx = (self.eye.x0 + self.eye.x1) as f64 / 2.0 + gx;
        let pupil_cy = (self.eye.y0 + self.eye.y1) as f64 / 2.0 + gy;
        let pupil_r = 0.35 * self.eye.height().min(self.eye.width()) as f64;
        let cx = self.w as f64 / 2.0;
        let cy = self.h as f64 / 2.0;
        let rmax_sq = cx * cx + cy * cy;

        let mut out = Array2::<u8>::zeros((self.h, self.w));
        for y in 0..self.h {
            for x in 0..self.w {
                let in_eye = self.eye.contains(x, y);
                let (base, gain) = if in_eye {
                    if blinking {
                        (LID_BASE, 0.0)
                    } else {
                        let dx = x as f64 - pupil_cx;
                        let dy = y as f64 - pupil_cy;
                        if dx * dx + dy * dy < pupil_r * pupil_r {
                            (PUPIL_BASE, 0.0)
                        } else {
                            (
                                SCLERA_BASE,
                                self.pulse_amplitude * self.eye_pulse_fraction,
                            )
                        }
                    }
                } else {
                    (SKIN_BASE, self.pulse_amplitude)
                };
                // Gentle vignette on the diffuse base.
                let dx = x as f64 - cx;
                let dy = y as f64 - cy;
                let vignette = 1.0 - 0.15 * (dx * dx + dy * dy) / rmax_sq;
                let diffuse = base * vignette + gain * pulse;
                let specular = spec * (0.7 + 0.6 * x as f64 / self.w as f64);
                let mut v = diffuse + specular + wobble;
                v += self.noise_std * normal.sample(&mut rng);
                if corrupt > 0.0 {
                    v += 0.06 * corrupt * normal.sample(&mut rng);
                }
                out[[y, x]] = (v * 255.0).round().clamp(0.0, 255.0) as u8;
            }
        }
        out
    }

    pub fn skin_region(&self) -> Rect {
        self.skin
    }

    pub fn eye_region(&self) -> Rect {
        self.eye
    }
}
