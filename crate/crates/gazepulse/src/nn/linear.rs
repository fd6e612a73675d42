//! Fully connected layer on (N, in) batches.

use ndarray::Array2;

use super::init::Initializer;
use super::params::{Param, Visit};

pub struct Linear {
    pub weight: Param, // (out, in)
    pub bias: Option<Param>,
    cache_x: Option<Array2<f64>>,
    in_dim: usize,
    out_dim: usize,
}

impl Linear {
    pub fn new(name: &str, in_dim: usize, out_dim: usize, bias: bool, init: &mut Initializer) -> Self {
        let weight = Param::new(format!("{name}.weight"), init.kaiming(&[out_dim, in_dim], in_dim));
        let bias = bias.then(|| Param::zeros(format!("{name}.bias"), &[out_dim]));
        Self {
            weight,
            bias,
            cache_x: None,
            in_dim,
            out_dim,
        }
    }

    pub fn forward(&mut self, x: &Array2<f64>, cache: bool) -> Array2<f64> {
        debug_assert_eq!(x.ncols(), self.in_dim);
        let w = self.weight.value2(self.out_dim, self.in_dim);
        let mut y = x.dot(&w.t());
        if let Some(b) = &self.bias {
            let bv = b.value.as_slice().expect("contiguous");
            for mut row in y.rows_mut() {
                for (v, bb) in row.iter_mut().zip(bv) {
                    *v += bb;
                }
            }
        }
        self.cache_x = cache.then(|| x.clone());
        y
    }

    /// Accumulates parameter gradients and returns dL/dx.
    pub fn backward(&mut self, dy: &Array2<f64>) -> Array2<f64> {
        let x = self.cache_x.as_ref().expect("forward(cache=true) first");
        {
            let dw = dy.t().dot(x);
            let mut g = self.weight.grad2_mut(self.out_dim, self.in_dim);
            g += &dw;
        }
        if let Some(b) = &mut self.bias {
            let gb = b.grad.as_slice_mut().expect("contiguous");
            for row in dy.rows() {
                for (g, v) in gb.iter_mut().zip(row.iter()) {
                    *g += v;
                }
            }
        }
        let w = self.weight.value2(self.out_dim, self.in_dim);
        dy.dot(&w)
    }
}

impl Visit for Linear {
    fn visit_params(&mut self, f: &mut dyn FnMut(&mut Param)) {
        f(&mut self.weight);
        if let Some(b) = &mut self.bias {
            f(b);
        }
    }
}
