use std::io::Write;

use orion_dtn::arma::{
    acf, fit_batch, pacf, simulate_arma, stationarity_check, ArmaError, ArmaOnlineState, ArmaParams,
};
use orion_dtn::experiment::{fit_series, FitError};
use proptest::prelude::*;

fn ar2(n: usize, seed: u64) -> Vec<f64> {
    simulate_arma(&ArmaParams::new(10.0, 0.5, 0.2, 0.0, 1.0), n, seed).unwrap()
}

#[test]
fn pacf_cuts_off_after_lag_two() {
    let xs = ar2(20_000, 9);
    let r = acf(&xs, 6).unwrap();
    let a = pacf(&r, 6).unwrap();
    // population values: alpha1 = rho1 = 0.625, alpha2 = phi2 = 0.2
    assert!((a[0] - 0.625).abs() < 0.03, "{a:?}");
    assert!((a[1] - 0.2).abs() < 0.03, "{a:?}");
    let band = 3.0 / (xs.len() as f64).sqrt();
    for &v in &a[2..] {
        assert!(v.abs() < band, "{a:?}");
    }
}

#[test]
fn simulated_series_are_stationary() {
    let passed = (0..20)
        .filter(|&seed| stationarity_check(&ar2(4000, seed), 4, 3.0).unwrap().passed)
        .count();
    assert!(passed >= 18, "{passed}/20");
}

#[test]
fn level_shift_is_not_stationary() {
    let mut xs = ar2(4000, 5);
    for x in &mut xs[2000..] {
        *x += 3.0;
    }
    assert!(!stationarity_check(&xs, 4, 3.0).unwrap().mean_stable);
}

#[test]
fn explosive_parameters_are_rejected() {
    let bad = ArmaParams::new(0.0, 0.9, 0.2, 0.0, 1.0);
    assert!(matches!(simulate_arma(&bad, 10, 1), Err(ArmaError::NonStationary)));
}

#[test]
fn online_tracks_batch_at_every_prefix() {
    let xs = ar2(600, 12);
    let mut online = ArmaOnlineState::new(1.0);
    for (i, &x) in xs.iter().enumerate() {
        online.update(x);
        if i + 1 >= 5 {
            let b = fit_batch(&xs[..=i]).unwrap();
            let o = online.params();
            for (u, v) in [(b.phi1, o.phi1), (b.phi2, o.phi2), (b.theta1, o.theta1)] {
                assert!((u - v).abs() < 1e-9, "prefix {}: {b:?} vs {o:?}", i + 1);
            }
        }
    }
}

fn csv_file(header: &str, values: impl Iterator<Item = f64>) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "{header}").unwrap();
    for (i, v) in values.enumerate() {
        writeln!(f, "{i},{v}").unwrap();
    }
    f.flush().unwrap();
    f
}

#[test]
fn fit_recovers_ar2_file() {
    let f = csv_file("t,value", ar2(10_000, 21).into_iter());
    let r = fit_series(f.path(), "value").unwrap();
    assert!((r.params.phi1 - 0.5).abs() < 0.05, "{r}");
    assert!((r.params.phi2 - 0.2).abs() < 0.05, "{r}");
    assert!(r.stationarity.passed);
    assert_eq!(r.n, 10_000);
}

#[test]
fn fit_rejects_constant_column() {
    let f = csv_file("t,value", std::iter::repeat_n(3.0, 50));
    assert!(matches!(
        fit_series(f.path(), "value"),
        Err(FitError::Arma(ArmaError::DegenerateSeries))
    ));
}

#[test]
fn fit_flags_trend() {
    let f = csv_file("t,value", (1..=400).map(f64::from));
    let r = fit_series(f.path(), "value").unwrap();
    assert!(!r.stationarity.passed);
}

#[test]
fn fit_reports_missing_column_and_bad_cells() {
    let f = csv_file("t,value", [1.0, 2.0].into_iter());
    assert!(matches!(fit_series(f.path(), "other"), Err(FitError::MissingColumn(_))));
    let mut g = tempfile::NamedTempFile::new().unwrap();
    write!(g, "value\n1\nabc\n").unwrap();
    assert!(matches!(fit_series(g.path(), "value"), Err(FitError::Parse { row: 3, .. })));
}

proptest! {
    #[test]
    fn online_forecasts_are_finite_and_non_negative(values in prop::collection::vec(0.0f64..500.0, 0..120)) {
        let mut s = ArmaOnlineState::new(1.0);
        for &v in &values {
            let f = s.forecast_next();
            prop_assert!(f.is_finite() && f >= 0.0);
            s.update(v);
            prop_assert!(s.params().is_stationary() || s.params().is_mean_only());
        }
    }
}
