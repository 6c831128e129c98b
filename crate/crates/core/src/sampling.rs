//! Reproducible low-discrepancy sample sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Additive-recurrence (Kronecker) sequence in `[0, 1)^dim` with generator
/// `1/φ_d^i`, `φ_d` the positive root of `x^(dim+1) = x + 1`. The seed fixes a
/// random starting offset.
#[derive(Clone, Debug)]
pub struct QuasiRandom {
    step: Vec<f64>,
    state: Vec<f64>,
}

impl QuasiRandom {
    pub fn new(dim: usize, seed: u64) -> Self {
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        }
        let step = (1..=dim).map(|i| phi.powi(-(i as i32)).fract()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = (0..dim).map(|_| rng.gen::<f64>()).collect();
        Self { step, state }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        for (s, a) in self.state.iter_mut().zip(&self.step) {
            *s = (*s + a).fract();
        }
        self.state.clone()
    }

    /// Next point mapped affinely onto the box `[lo_i, hi_i]`.
    pub fn next_in_box(&mut self, lo: &[f64], hi: &[f64]) -> Vec<f64> {
        self.next_point()
            .into_iter()
            .zip(lo.iter().zip(hi))
            .map(|(u, (&l, &h))| l + (h - l) * u)
            .collect()
    }
}
