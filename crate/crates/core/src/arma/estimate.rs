use super::stats::{autocovariance, mean};
use super::{ar2_is_stationary, ArmaError, ArmaParams, MIN_HISTORY};

/// Solves the order-2 Yule-Walker system
///
/// ```text
/// gamma1 = phi1 gamma0 + phi2 gamma1
/// gamma2 = phi1 gamma1 + phi2 gamma0
/// ```
///
/// returning `(phi1, phi2, sigma2)` with `sigma2 = gamma0 - phi1 gamma1 - phi2 gamma2`
/// clamped at zero.
pub fn yule_walker_ar2(gamma0: f64, gamma1: f64, gamma2: f64) -> Result<(f64, f64, f64), ArmaError> {
    if !(gamma0 > 0.0) || gamma1.abs() >= gamma0 {
        return Err(ArmaError::SingularSystem);
    }
    let det = gamma0 * gamma0 - gamma1 * gamma1;
    let phi1 = (gamma1 * gamma0 - gamma1 * gamma2) / det;
    let phi2 = (gamma0 * gamma2 - gamma1 * gamma1) / det;
    let sigma2 = (gamma0 - phi1 * gamma1 - phi2 * gamma2).max(0.0);
    Ok((phi1, phi2, sigma2))
}

/// Invertible MA(1) coefficient matching a lag-1 autocorrelation,
/// `rho1 = theta / (1 + theta^2)`. Clamps to `+-1` when no real root exists.
pub fn estimate_ma1(residual_rho1: f64) -> f64 {
    if !residual_rho1.is_finite() || residual_rho1 == 0.0 {
        return 0.0;
    }
    if residual_rho1.abs() >= 0.5 {
        return residual_rho1.signum();
    }
    // smaller root of rho theta^2 - theta + rho = 0
    let disc = (1.0 - 4.0 * residual_rho1 * residual_rho1).sqrt();
    (1.0 - disc) / (2.0 * residual_rho1)
}

/// Autocovariance at lag `h` (0 or 1) of the AR(2) residual
/// `e_t = x_t - phi1 x_{t-1} - phi2 x_{t-2}`, given autocovariances of `x`
/// at lags 0..=3.
pub fn residual_autocovariance(phi1: f64, phi2: f64, gamma: &[f64; 4], h: usize) -> f64 {
    let a = [1.0, -phi1, -phi2];
    let mut acc = 0.0;
    for (i, ai) in a.iter().enumerate() {
        for (j, aj) in a.iter().enumerate() {
            let lag = (h as isize + j as isize - i as isize).unsigned_abs();
            acc += ai * aj * gamma[lag];
        }
    }
    acc
}

/// Maps a sample mean and the biased autocovariances at lags 0..=3 to
/// ARMA(2,1) parameters.
///
/// Falls back to a mean-only model whenever the Yule-Walker system is singular
/// or its solution leaves the stationarity triangle.
pub fn params_from_moments(mean: f64, gamma: &[f64; 4]) -> ArmaParams {
    let gamma0 = gamma[0].max(0.0);
    let Ok((phi1, phi2, sigma2)) = yule_walker_ar2(gamma[0], gamma[1], gamma[2]) else {
        return ArmaParams::mean_only(mean, gamma0);
    };
    if !ar2_is_stationary(phi1, phi2) {
        return ArmaParams::mean_only(mean, gamma0);
    }
    let c0 = residual_autocovariance(phi1, phi2, gamma, 0);
    let c1 = residual_autocovariance(phi1, phi2, gamma, 1);
    let theta1 = if c0 > 0.0 { estimate_ma1(c1 / c0) } else { 0.0 };
    ArmaParams::new(mean, phi1, phi2, theta1, sigma2)
}

/// Fits ARMA(2,1) parameters to a whole series with two-pass sample moments.
///
/// Produces the same parameters as feeding the series through
/// [`ArmaOnlineState::update`](super::ArmaOnlineState::update), but computes
/// every autocovariance directly from its definition.
pub fn fit_batch(series: &[f64]) -> Result<ArmaParams, ArmaError> {
    let needed = MIN_HISTORY as usize;
    if series.len() < needed {
        return Err(ArmaError::InsufficientData {
            needed,
            got: series.len(),
        });
    }
    if let Some((index, &value)) = series.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(ArmaError::InvalidValue { index, value });
    }
    let gamma = [0, 1, 2, 3].map(|k| autocovariance(series, k));
    if gamma[0] <= 0.0 {
        return Err(ArmaError::DegenerateSeries);
    }
    Ok(params_from_moments(mean(series), &gamma))
}
