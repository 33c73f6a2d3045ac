//! Reproducible sample points inside the chart.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::manifold::{CoordPoint, ModelParams};

/// Half-width of the sampling box `[-0.5, 0.5]^7`.
pub const BOX_HALF_WIDTH: f64 = 0.5;
/// Points with `K` at or below this value are rejected.
pub const MIN_K: f64 = 0.1;
const MAX_ATTEMPTS_PER_POINT: usize = 10_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut impl Rng, half_width: f64) -> CoordPoint {
    CoordPoint::from_array(std::array::from_fn(|_| rng.random_range(-half_width..=half_width)))
}

/// `n` points uniform in the sampling box with `K > MIN_K`.
pub fn sample_points(p: &ModelParams, n: usize, seed: u64) -> Result<Vec<CoordPoint>> {
    let mut rng = rng(seed);
    sample_points_with(&mut rng, p, n)
}

pub fn sample_points_with(rng: &mut impl Rng, p: &ModelParams, n: usize) -> Result<Vec<CoordPoint>> {
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    let budget = MAX_ATTEMPTS_PER_POINT * n.max(1);
    while out.len() < n {
        let q = random_point(rng, BOX_HALF_WIDTH);
        let k = 1.0 + p.m * q.horizontal_norm2();
        if k > MIN_K {
            out.push(q);
        }
        attempts += 1;
        if attempts > budget {
            return Err(Error::DomainViolation { k });
        }
    }
    Ok(out)
}
