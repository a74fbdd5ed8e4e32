use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{ArmaError, ArmaParams};

const BURN_IN: usize = 100;

/// Draws `n` samples of the mean-centred ARMA(2,1) process with Gaussian
/// innovations, discarding a 100-sample burn-in. Deterministic per `seed`.
///
/// Values are not clamped, so a low mean relative to the noise can produce
/// negative samples.
pub fn simulate_arma(params: &ArmaParams, n: usize, seed: u64) -> Result<Vec<f64>, ArmaError> {
    if !params.is_stationary() {
        return Err(ArmaError::NonStationary);
    }
    if !(params.sigma2 > 0.0) {
        return Err(ArmaError::InvalidArgument("sigma2 must be positive"));
    }
    let noise = Normal::new(0.0, params.sigma2.sqrt())
        .map_err(|_| ArmaError::InvalidArgument("sigma2 must be finite"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut prev1 = params.mu;
    let mut prev2 = params.mu;
    let mut prev_eps = 0.0;
    let mut out = Vec::with_capacity(n);
    for i in 0..BURN_IN + n {
        let eps = noise.sample(&mut rng);
        let y = params.predict(prev1, prev2, prev_eps) + eps;
        prev2 = prev1;
        prev1 = y;
        prev_eps = eps;
        if i >= BURN_IN {
            out.push(y);
        }
    }
    Ok(out)
}
