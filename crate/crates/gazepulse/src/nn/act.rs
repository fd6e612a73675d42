//! Elementwise activations with cached state for the backward pass.
//! ELU is used throughout the network: it is C1 everywhere, which keeps the
//! finite-difference gradient contract tight.

use ndarray::ArrayD;

/// ELU with alpha = 1.
pub struct Elu {
    cache_y: Option<ArrayD<f64>>,
}

impl Elu {
    pub fn new() -> Self {
        Self { cache_y: None }
    }

    pub fn forward(&mut self, x: &ArrayD<f64>, cache: bool) -> ArrayD<f64> {
        let y = x.mapv(|v| if v > 0.0 { v } else { v.exp_m1() });
        if cache {
            self.cache_y = Some(y.clone());
        }
        y
    }

    pub fn backward(&mut self, dy: &ArrayD<f64>) -> ArrayD<f64> {
        let y = self.cache_y.as_ref().expect("forward(cache=true) first");
        let mut dx = dy.clone();
        dx.zip_mut_with(y, |d, &yy| {
            // dy/dx = 1 for x > 0, exp(x) = y + 1 otherwise.
            if yy <= 0.0 {
                *d *= yy + 1.0;
            }
        });
        dx
    }
}

impl Default for Elu {
    fn default() -> Self {
        Self::new()
    }
}

/// Logistic sigmoid.
pub struct Sigmoid {
    cache_y: Option<ArrayD<f64>>,
}

impl Sigmoid {
    pub fn new() -> Self {
        Self { cache_y: None }
    }

    pub fn forward(&mut self, x: &ArrayD<f64>, cache: bool) -> ArrayD<f64> {
        let y = x.mapv(|v| 1.0 / (1.0 + (-v).exp()));
        if cache {
            self.cache_y = Some(y.clone());
        }
        y
    }

    pub fn backward(&mut self, dy: &ArrayD<f64>) -> ArrayD<f64> {
        let y = self.cache_y.as_ref().expect("forward(cache=true) first");
        let mut dx = dy.clone();
        dx.zip_mut_with(y, |d, &yy| *d *= yy * (1.0 - yy));
        dx
    }
}

impl Default for Sigmoid {
    fn default() -> Self {
        Self::new()
    }
}
