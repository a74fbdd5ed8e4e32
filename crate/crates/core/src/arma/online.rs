use super::estimate::params_from_moments;
use super::ArmaParams;

/// Observations needed before the AR/MA parameters are estimated; below this
/// the model forecasts the running mean.
pub const MIN_HISTORY: u64 = 5;

const MAX_LAG: usize = 3;

/// Constant-memory ARMA(2,1) estimator for one duration series.
///
/// Keeps the running sum, the sum of squares, lagged cross products for lags
/// 1..=3 and the first and last three observations. These are enough to
/// rebuild the biased autocovariances of the whole history exactly, so the
/// parameters after every update equal a batch fit over all observations.
/// All aggregates are taken about the first observation to avoid
/// cancellation when the mean is large compared to the spread.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmaOnlineState {
    n: u64,
    shift: f64,
    sum_y: f64,
    sum_sq: f64,
    /// `lag_products[k-1] = sum_t z_t * z_{t-k}` with `z = y - shift`
    lag_products: [f64; MAX_LAG],
    /// First and last shifted observations, most recent last.
    head: [f64; MAX_LAG],
    tail: [f64; MAX_LAG],
    last_residual: f64,
    params: ArmaParams,
    last_forecast: f64,
    floor: f64,
}

impl ArmaOnlineState {
    /// `floor` is the forecast returned before any observation, normally the
    /// sampling period of the series.
    pub fn new(floor: f64) -> Self {
        Self {
            n: 0,
            shift: 0.0,
            sum_y: 0.0,
            sum_sq: 0.0,
            lag_products: [0.0; MAX_LAG],
            head: [0.0; MAX_LAG],
            tail: [0.0; MAX_LAG],
            last_residual: 0.0,
            params: ArmaParams::mean_only(0.0, 0.0),
            last_forecast: floor,
            floor,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn params(&self) -> &ArmaParams {
        &self.params
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.shift + self.sum_y / self.n as f64
        }
    }

    pub fn last_residual(&self) -> f64 {
        self.last_residual
    }

    /// The prediction issued after the most recent update.
    pub fn last_forecast(&self) -> f64 {
        self.last_forecast
    }

    /// Most recent observation, if any.
    pub fn last_value(&self) -> Option<f64> {
        (self.n > 0).then(|| self.shift + self.tail[MAX_LAG - 1])
    }

    pub fn is_estimating(&self) -> bool {
        self.n >= MIN_HISTORY
    }

    /// Biased autocovariance at `lag` (0..=3) of everything observed so far.
    pub fn autocovariance(&self, lag: usize) -> f64 {
        assert!(lag <= MAX_LAG, "lag {lag} is not tracked");
        let n = self.n as usize;
        if n == 0 || lag >= n {
            return 0.0;
        }
        let nf = n as f64;
        let m = self.sum_y / nf;
        let cross = if lag == 0 {
            self.sum_sq
        } else {
            self.lag_products[lag - 1]
        };
        // sum over t = 1..n-lag of z_t, and t = lag+1..n of z_t
        let leading = self.sum_y - self.tail[MAX_LAG - lag..].iter().sum::<f64>();
        let trailing = self.sum_y - self.head[..lag].iter().sum::<f64>();
        (cross - m * (leading + trailing) + (n - lag) as f64 * m * m) / nf
    }

    /// One-step forecast of the next value, clamped at zero.
    pub fn forecast_next(&self) -> f64 {
        if self.n == 0 {
            return self.floor;
        }
        if self.n < MIN_HISTORY {
            return self.mean().max(0.0);
        }
        let prev1 = self.shift + self.tail[MAX_LAG - 1];
        let prev2 = self.shift + self.tail[MAX_LAG - 2];
        self.params
            .predict(prev1, prev2, self.last_residual)
            .max(0.0)
    }

    /// Folds one observation into the aggregates and re-estimates.
    pub fn update(&mut self, y_new: f64) {
        let was_estimating = self.is_estimating();
        let prior = self.forecast_next();
        self.last_residual = if was_estimating { y_new - prior } else { 0.0 };

        let n = self.n as usize;
        if n == 0 {
            self.shift = y_new;
        }
        let z = y_new - self.shift;
        for k in 1..=MAX_LAG.min(n) {
            self.lag_products[k - 1] += z * self.tail[MAX_LAG - k];
        }
        if n < MAX_LAG {
            self.head[n] = z;
        }
        self.tail.rotate_left(1);
        self.tail[MAX_LAG - 1] = z;
        self.sum_y += z;
        self.sum_sq += z * z;
        self.n += 1;

        let mu = self.mean();
        self.params = if self.is_estimating() {
            let gamma = [0, 1, 2, 3].map(|k| self.autocovariance(k));
            params_from_moments(mu, &gamma)
        } else {
            ArmaParams::mean_only(mu, self.autocovariance(0))
        };
        self.last_forecast = self.forecast_next();
    }
}
