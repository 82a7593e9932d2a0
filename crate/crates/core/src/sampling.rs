//! Seeded random streams shared by the generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub(crate) type Stream = ChaCha8Rng;

pub(crate) fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn gaussian_vec(rng: &mut Stream, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// A point of the unit ball of `norm`: a Gaussian direction rescaled to
/// `norm = r`, with `r` uniform on `[0, 1]`.
pub(crate) fn in_unit_ball(rng: &mut Stream, len: usize, norm: impl Fn(&[f64]) -> f64) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, len);
        let r = norm(&v);
        if r > 0.0 {
            let radius: f64 = rng.random();
            return v.into_iter().map(|x| x * radius / r).collect();
        }
    }
}
