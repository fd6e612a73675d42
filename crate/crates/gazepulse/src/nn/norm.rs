//! Per-channel normalization over all non-channel axes of one item, with a
//! learnable affine. Statistics are computed per forward call (instance
//! style), so behavior is identical in training and evaluation and per-item
//! gradients are exact regardless of batch composition.

use ndarray::{ArrayD, Axis};

use super::params::{Param, Visit};

pub const NORM_EPS: f64 = 1e-5;

/// Normalizes axis 1 (channels) of an (N, C, ...) tensor, pooling statistics
/// over N and all trailing axes.
pub struct ChannelNorm {
    pub gamma: Param,
    pub beta: Param,
    channels: usize,
    cache: Option<Cache>,
}

struct Cache {
    x_hat: ArrayD<f64>,
    inv_std: Vec<f64>,
}

impl ChannelNorm {
    pub fn new(name: &str, channels: usize) -> Self {
        let gamma = Param::new(
            format!("{name}.gamma"),
            ArrayD::from_elem(ndarray::IxDyn(&[channels]), 1.0),
        );
        let beta = Param::zeros(format!("{name}.beta"), &[channels]);
        Self {
            gamma,
            beta,
            channels,
            cache: None,
        }
    }

    pub fn forward(&mut self, x: &ArrayD<f64>, cache: bool) -> ArrayD<f64> {
        debug_assert_eq!(x.shape()[1], self.channels);
        let gamma = self.gamma.value.as_slice().expect("contiguous");
        let beta = self.beta.value.as_slice().expect("contiguous");

        let mut x_hat = x.clone();
        let mut inv_stds = Vec::with_capacity(self.channels);
        for c in 0..self.channels {
            let mut lane = x_hat.index_axis_mut(Axis(1), c);
            let n = lane.len() as f64;
            let mean = lane.sum() / n;
            let var = lane.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let inv_std = 1.0 / (var + NORM_EPS).sqrt();
            lane.mapv_inplace(|v| (v - mean) * inv_std);
            inv_stds.push(inv_std);
        }
        let mut y = x_hat.clone();
        for c in 0..self.channels {
            let mut lane = y.index_axis_mut(Axis(1), c);
            lane.mapv_inplace(|v| v * gamma[c] + beta[c]);
        }
        if cache {
            self.cache = Some(Cache {
                x_hat,
                inv_std: inv_stds,
            });
        }
        y
    }

    pub fn backward(&mut self, dy: &ArrayD<f64>) -> ArrayD<f64> {
        let cache = self.cache.as_ref().expect("forward(cache=true) first");
        let gamma = self.gamma.value.as_slice().expect("contiguous").to_vec();
        let ggrad = self.gamma.grad.as_slice_mut().expect("contiguous");
        let bgrad = self.beta.grad.as_slice_mut().expect("contiguous");

        let mut dx = dy.clone();
        for c in 0..self.channels {
            let x_hat = cache.x_hat.index_axis(Axis(1), c);
            let dy_c = dy.index_axis(Axis(1), c);
            let n = x_hat.len() as f64;

            let mut sum_dy = 0.0;
            let mut sum_dy_xhat = 0.0;
            for (&d, &xh) in dy_c.iter().zip(x_hat.iter()) {
                sum_dy += d;
                sum_dy_xhat += d * xh;
            }
            ggrad[c] += sum_dy_xhat;
            bgrad[c] += sum_dy;

            // dx = gamma * inv_std * (dy - mean(dy) - x_hat * mean(dy*x_hat))
            let k = gamma[c] * cache.inv_std[c];
            let m_dy = sum_dy / n;
            let m_dyx = sum_dy_xhat / n;
            let mut lane = dx.index_axis_mut(Axis(1), c);
            for (d, &xh) in lane.iter_mut().zip(x_hat.iter()) {
                *d = k * (*d - m_dy - xh * m_dyx);
            }
        }
        dx
    }
}

impl Visit for ChannelNorm {
    fn visit_params(&mut self, f: &mut dyn FnMut(&mut Param)) {
        f(&mut self.gamma);
        f(&mut self.beta);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::IxDyn;
    use rand::{Rng, SeedableRng};

    #[test]
    fn normalizes_each_channel() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let x = ArrayD::from_shape_fn(IxDyn(&[3, 4, 5, 6]), |_| rng.gen_range(-3.0..5.0));
        let mut norm = ChannelNorm::new("n", 4);
        let y = norm.forward(&x, false);
        for c in 0..4 {
            let lane = y.index_axis(Axis(1), c);
            let n = lane.len() as f64;
            let mean = lane.sum() / n;
            let var = lane.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            assert!(mean.abs() < 1e-12);
            assert!((var - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let x = ArrayD::from_shape_fn(IxDyn(&[2, 2, 3]), |_| rng.gen_range(-1.0..1.0));
        let w = ArrayD::from_shape_fn(IxDyn(&[2, 2, 3]), |_| rng.gen_range(-1.0..1.0));
        let loss = |norm: &mut ChannelNorm, x: &ArrayD<f64>| -> f64 {
            let y = norm.forward(x, false);
            (&y * &w).sum()
        };

        let mut norm = ChannelNorm::new("n", 2);
        norm.gamma.value.mapv_inplace(|_| rng.gen_range(0.5..1.5));
        norm.beta.value.mapv_inplace(|_| rng.gen_range(-0.5..0.5));

        let _ = norm.forward(&x, true);
        let dx = norm.backward(&w);

        let h = 1e-6;
        for idx in [[0, 0, 0], [1, 1, 2], [0, 1, 1]] {
            let mut xp = x.clone();
            xp[IxDyn(&idx)] += h;
            let mut xm = x.clone();
            xm[IxDyn(&idx)] -= h;
            let fd = (loss(&mut norm, &xp) - loss(&mut norm, &xm)) / (2.0 * h);
            let got = dx[IxDyn(&idx)];
            assert!((fd - got).abs() < 1e-6, "idx {idx:?}: {got} vs {fd}");
        }

        // Parameter gradients.
        let h = 1e-6;
        for c in 0..2 {
            let base_g = norm.gamma.grad[[c]];
            norm.gamma.value[[c]] += h;
            let lp = loss(&mut norm, &x);
            norm.gamma.value[[c]] -= 2.0 * h;
            let lm = loss(&mut norm, &x);
            norm.gamma.value[[c]] += h;
            let fd = (lp - lm) / (2.0 * h);
            assert!((fd - base_g).abs() < 1e-6, "gamma {c}: {base_g} vs {fd}");
        }
    }
}
