//! Weight initialization: Kaiming-normal for conv/linear weights, zeros for
//! biases, ones/zeros for normalization affine terms. All draws come from a
//! single seeded stream in construction order, so a model build is a pure
//! function of its config seed.

use ndarray::{ArrayD, IxDyn};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub struct Initializer {
    rng: ChaCha8Rng,
}

impl Initializer {
    pub fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Kaiming-normal tensor with the given fan-in.
    pub fn kaiming(&mut self, shape: &[usize], fan_in: usize) -> ArrayD<f64> {
        let std = (2.0 / fan_in as f64).sqrt();
        let normal = Normal::new(0.0, std).unwrap();
        let n: usize = shape.iter().product();
        let data: Vec<f64> = (0..n).map(|_| normal.sample(&mut self.rng)).collect();
        ArrayD::from_shape_vec(IxDyn(shape), data).expect("init shape")
    }

    pub fn uniform(&mut self, shape: &[usize], lo: f64, hi: f64) -> ArrayD<f64> {
        let n: usize = shape.iter().product();
        let data: Vec<f64> = (0..n).map(|_| self.rng.gen_range(lo..hi)).collect();
        ArrayD::from_shape_vec(IxDyn(shape), data).expect("init shape")
    }
}
