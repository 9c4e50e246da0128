use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;

use crate::error::{Error, Result};
use crate::grid::ForceFrame;

/// Per-taxel force noise standard deviation used by the presets, in newtons.
pub const DEFAULT_NOISE_SIGMA: f64 = 0.005;

/// Adds i.i.d. zero-mean Gaussian noise to every component of every taxel.
pub fn add_noise(frame: &ForceFrame, sigma: f64, seed: u64) -> Result<ForceFrame> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise sigma must be nonnegative, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(frame.clone());
    }
    let normal = Normal::new(0.0, sigma).expect("sigma checked above");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perturb =
        |values: &[f64]| -> Vec<f64> { values.iter().map(|v| v + rng.sample(normal)).collect() };
    let fx = perturb(frame.fx());
    let fy = perturb(frame.fy());
    let fz = perturb(frame.fz());
    ForceFrame::new(frame.timestamp(), frame.n(), fx, fy, fz)
}
