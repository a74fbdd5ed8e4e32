//! ARMA(2,1) modelling of contact and non-contact duration series.
//!
//! The model used for forecasting is the mean-centred form
//!
//! ```text
//! C_i = mu + phi1 (C_{i-1} - mu) + phi2 (C_{i-2} - mu) + theta1 e_{i-1} + e_i
//! ```
//!
//! Identification tools ([`acf`], [`pacf`], [`stationarity_check`]) work on
//! plain slices. Estimation is done by Yule-Walker for the AR(2) part and by
//! moment matching on the AR residuals for the MA(1) part; [`ArmaOnlineState`]
//! re-runs that estimation after every observation from a handful of running
//! sums, and [`fit_batch`] computes the same thing from a full series.

mod estimate;
mod online;
mod simulate;
mod stats;

pub use estimate::{
    estimate_ma1, fit_batch, params_from_moments, residual_autocovariance, yule_walker_ar2,
};
pub use online::{ArmaOnlineState, MIN_HISTORY};
pub use simulate::simulate_arma;
pub use stats::{
    acf, autocovariance, mean, pacf, stationarity_check, Series, StationarityReport,
};

use thiserror::Error;

/// Errors raised by the time-series routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArmaError {
    #[error("series has zero variance")]
    DegenerateSeries,
    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("Yule-Walker system is singular (|gamma1| >= gamma0)")]
    SingularSystem,
    #[error("Durbin-Levinson recursion hit zero prediction-error variance at lag {lag}")]
    RecursionSingular { lag: usize },
    #[error("parameters lie outside the AR(2) stationarity triangle")]
    NonStationary,
    #[error("invalid series value {value} at index {index}")]
    InvalidValue { index: usize, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// Parameters of the ARMA(2,1) contact model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmaParams {
    /// Process mean (seconds).
    pub mu: f64,
    pub phi1: f64,
    pub phi2: f64,
    /// MA(1) coefficient, always within [-1, 1].
    pub theta1: f64,
    /// Innovation variance (seconds squared).
    pub sigma2: f64,
}

impl ArmaParams {
    pub fn new(mu: f64, phi1: f64, phi2: f64, theta1: f64, sigma2: f64) -> Self {
        Self {
            mu,
            phi1,
            phi2,
            theta1,
            sigma2,
        }
    }

    /// A model that always predicts the mean.
    pub fn mean_only(mu: f64, sigma2: f64) -> Self {
        Self::new(mu, 0.0, 0.0, 0.0, sigma2.max(0.0))
    }

    /// `true` when the AR part is strictly inside the stationarity triangle.
    pub fn is_stationary(&self) -> bool {
        ar2_is_stationary(self.phi1, self.phi2)
    }

    pub fn is_mean_only(&self) -> bool {
        self.phi1 == 0.0 && self.phi2 == 0.0 && self.theta1 == 0.0
    }

    /// One-step prediction given the two previous values and the previous
    /// innovation. Not clamped; see [`ArmaOnlineState::forecast_next`] for the
    /// non-negative variant used on durations.
    pub fn predict(&self, prev1: f64, prev2: f64, last_residual: f64) -> f64 {
        self.mu
            + self.phi1 * (prev1 - self.mu)
            + self.phi2 * (prev2 - self.mu)
            + self.theta1 * last_residual
    }
}

/// AR(2) stationarity triangle: `phi1 + phi2 < 1`, `phi2 - phi1 < 1`, `|phi2| < 1`.
pub fn ar2_is_stationary(phi1: f64, phi2: f64) -> bool {
    phi1.is_finite() && phi2.is_finite() && phi2 + phi1 < 1.0 && phi2 - phi1 < 1.0 && phi2.abs() < 1.0
}
