//! Seeded random metrics and test data.
//!
//! Frames are drawn from a ChaCha8 stream seeded with the `u64` seed. For each
//! sample the upper triangle of `P` is filled row by row: diagonal entries are
//! `exp(u)` with `u ~ U[−1, 1]` (log-uniform on `[e⁻¹, e]`), strict
//! off-diagonal entries are `U[−1, 1]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FrameChange, Mat};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_frame(rng: &mut impl Rng, dim: usize) -> FrameChange {
    let mut m = Mat::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let u: f64 = rng.random_range(-1.0..=1.0);
            m[(i, j)] = if i == j { u.exp() } else { u };
        }
    }
    FrameChange::new(m).expect("diagonal is positive")
}

/// `samples` frames from one seeded stream, in order.
pub fn sample_frames(dim: usize, samples: usize, seed: u64) -> Vec<FrameChange> {
    let mut r = rng(seed);
    (0..samples).map(|_| random_frame(&mut r, dim)).collect()
}

/// Random skew matrix with entries `U[−1, 1]` above the diagonal.
pub fn random_skew(rng: &mut impl Rng, dim: usize) -> Mat {
    let mut m = Mat::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let v: f64 = rng.random_range(-1.0..=1.0);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// Log-uniform positive value on `[e⁻¹, e]`.
pub fn random_positive(rng: &mut impl Rng) -> f64 {
    rng.random_range(-1.0f64..=1.0).exp()
}
