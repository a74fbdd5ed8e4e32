use super::ArmaError;

/// An ordered sequence of non-negative durations (seconds).
///
/// Index `i` is the `i`-th recorded contact (or non-contact).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Series(Vec<f64>);

impl Series {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    /// Builds a series, rejecting negative or non-finite values.
    pub fn from_values(values: Vec<f64>) -> Result<Self, ArmaError> {
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(ArmaError::InvalidValue { index, value });
        }
        Ok(Self(values))
    }

    pub fn push(&mut self, value: f64) -> Result<(), ArmaError> {
        if !value.is_finite() || value < 0.0 {
            return Err(ArmaError::InvalidValue {
                index: self.0.len(),
                value,
            });
        }
        self.0.push(value);
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl AsRef<[f64]> for Series {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub fn mean(series: &[f64]) -> f64 {
    if series.is_empty() {
        return 0.0;
    }
    series.iter().sum::<f64>() / series.len() as f64
}

/// Biased sample autocovariance at `lag` (denominator `n`).
pub fn autocovariance(series: &[f64], lag: usize) -> f64 {
    let n = series.len();
    if n == 0 || lag >= n {
        return 0.0;
    }
    let m = mean(series);
    let s: f64 = series[..n - lag]
        .iter()
        .zip(&series[lag..])
        .map(|(a, b)| (a - m) * (b - m))
        .sum();
    s / n as f64
}

/// Sample autocorrelations `rho_0 ..= rho_max_lag`.
pub fn acf(series: &[f64], max_lag: usize) -> Result<Vec<f64>, ArmaError> {
    if max_lag == 0 {
        return Err(ArmaError::InvalidArgument("max_lag must be positive"));
    }
    let needed = max_lag + 2;
    if series.len() < needed {
        return Err(ArmaError::InsufficientData {
            needed,
            got: series.len(),
        });
    }
    let gamma0 = autocovariance(series, 0);
    if gamma0 <= 0.0 {
        return Err(ArmaError::DegenerateSeries);
    }
    Ok((0..=max_lag)
        .map(|k| {
            if k == 0 {
                1.0
            } else {
                autocovariance(series, k) / gamma0
            }
        })
        .collect())
}

/// Partial autocorrelations `alpha_1 ..= alpha_max_lag` by the Durbin-Levinson
/// recursion over an autocorrelation sequence.
pub fn pacf(acf_values: &[f64], max_lag: usize) -> Result<Vec<f64>, ArmaError> {
    if max_lag == 0 {
        return Err(ArmaError::InvalidArgument("max_lag must be positive"));
    }
    if acf_values.len() < max_lag + 1 {
        return Err(ArmaError::InsufficientData {
            needed: max_lag + 1,
            got: acf_values.len(),
        });
    }
    if (acf_values[0] - 1.0).abs() > 1e-12 {
        return Err(ArmaError::InvalidArgument("acf_values[0] must be 1"));
    }

    let rho = acf_values;
    let mut out = Vec::with_capacity(max_lag);
    // coefficients of the order-(k-1) predictor, 1-based in the maths
    let mut prev: Vec<f64> = Vec::with_capacity(max_lag);
    let mut err_var = 1.0;

    for k in 1..=max_lag {
        if err_var <= f64::EPSILON {
            return Err(ArmaError::RecursionSingular { lag: k });
        }
        let dot: f64 = prev
            .iter()
            .enumerate()
            .map(|(j, phi)| phi * rho[k - 1 - j])
            .sum();
        let alpha = (rho[k] - dot) / err_var;
        let mut next = Vec::with_capacity(k);
        for j in 0..k - 1 {
            next.push(prev[j] - alpha * prev[k - 2 - j]);
        }
        next.push(alpha);
        err_var *= 1.0 - alpha * alpha;
        out.push(alpha);
        prev = next;
    }
    Ok(out)
}

/// Outcome of the windowed stationarity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StationarityReport {
    /// Window means agree with the global mean.
    pub mean_stable: bool,
    /// Lag-1 autocovariance agrees between the two halves.
    pub autocov_stable: bool,
    pub passed: bool,
}

/// Checks constant mean (windowed means inside a `tolerance_sigma` standard
/// error band around the global mean) and lag-only dependence of the
/// autocovariance (lag-1 autocovariances of the two halves within
/// `tolerance_sigma` standard errors of each other).
///
/// Both standard errors are inflated by the long-run variance factor
/// `1 + 2 * sum_k (1 - k/(L+1)) * rho_k` with `L = floor(n^(1/3))`, so
/// positively autocorrelated but stationary series are not rejected.
pub fn stationarity_check(
    series: &[f64],
    num_windows: usize,
    tolerance_sigma: f64,
) -> Result<StationarityReport, ArmaError> {
    if num_windows < 2 {
        return Err(ArmaError::InvalidArgument("num_windows must be at least 2"));
    }
    let n = series.len();
    if n < 4 * num_windows {
        return Err(ArmaError::InsufficientData {
            needed: 4 * num_windows,
            got: n,
        });
    }

    let global_mean = mean(series);
    let sample_var =
        series.iter().map(|y| (y - global_mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = sample_var.sqrt();

    let gamma0 = autocovariance(series, 0);
    let max_lag = (n as f64).cbrt().floor() as usize;
    let inflation = if gamma0 > 0.0 {
        let weighted: f64 = (1..=max_lag)
            .map(|k| (1.0 - k as f64 / (max_lag + 1) as f64) * autocovariance(series, k) / gamma0)
            .sum();
        (1.0 + 2.0 * weighted).max(1.0)
    } else {
        1.0
    };

    let window_len = n / num_windows;
    let band = tolerance_sigma * sd * (inflation / window_len as f64).sqrt();
    let mean_stable = series
        .chunks_exact(window_len)
        .take(num_windows)
        .all(|w| (mean(w) - global_mean).abs() <= band);

    let half = n / 2;
    let first = autocovariance(&series[..half], 1);
    let second = autocovariance(&series[half..], 1);
    let autocov_stable =
        (first - second).abs() <= tolerance_sigma * gamma0 * (2.0 * inflation / half as f64).sqrt();

    Ok(StationarityReport {
        mean_stable,
        autocov_stable,
        passed: mean_stable && autocov_stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn acf_of_short_ramp() {
        // gamma0 = 10/5 = 2, gamma1 = (-2*-1 + -1*0 + 0*1 + 1*2)/5 = 0.8
        let r = acf(&[1.0, 2.0, 3.0, 4.0, 5.0], 1).unwrap();
        assert_eq!(r[0], 1.0);
        assert!((r[1] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn acf_errors() {
        assert_eq!(
            acf(&[7.0, 7.0, 7.0, 7.0], 1),
            Err(ArmaError::DegenerateSeries)
        );
        assert!(matches!(
            acf(&[1.0, 2.0], 1),
            Err(ArmaError::InsufficientData { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn pacf_of_ar1_cuts_off() {
        let rho: Vec<f64> = (0..3).map(|k| 0.6f64.powi(k)).collect();
        let a = pacf(&rho, 2).unwrap();
        assert!((a[0] - 0.6).abs() < 1e-12);
        assert!(a[1].abs() < 1e-12);
    }

    #[test]
    fn pacf_of_white_noise_is_zero() {
        let a = pacf(&[1.0, 0.0, 0.0, 0.0, 0.0], 4).unwrap();
        assert!(a.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn pacf_of_ar2() {
        // alpha_2 = (rho2 - rho1^2) / (1 - rho1^2), solved independently
        let a = pacf(&[1.0, 0.625, 0.5125], 2).unwrap();
        assert!((a[0] - 0.625).abs() < 1e-15);
        assert!((a[1] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn pacf_singular() {
        assert_eq!(
            pacf(&[1.0, 1.0, 1.0], 2),
            Err(ArmaError::RecursionSingular { lag: 2 })
        );
    }

    #[test]
    fn stationarity_of_uniform_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let xs: Vec<f64> = (0..400).map(|_| rng.random::<f64>()).collect();
        let r = stationarity_check(&xs, 4, 3.0).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn stationarity_rejects_trend() {
        let xs: Vec<f64> = (1..=400).map(f64::from).collect();
        let r = stationarity_check(&xs, 4, 3.0).unwrap();
        assert!(!r.mean_stable);
        assert!(!r.passed);
    }

    #[test]
    fn stationarity_needs_data() {
        assert!(matches!(
            stationarity_check(&[1.0; 6], 4, 3.0),
            Err(ArmaError::InsufficientData { .. })
        ));
    }

    #[test]
    fn series_rejects_negative() {
        assert!(Series::from_values(vec![1.0, -1.0]).is_err());
        let mut s = Series::new();
        assert!(s.push(f64::NAN).is_err());
        s.push(3.0).unwrap();
        assert_eq!(s.values(), &[3.0]);
    }
}
