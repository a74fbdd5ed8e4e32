//! Identification and estimation on a synthetic ARMA(2,1) series: check
//! stationarity, read the ACF/PACF, then fit.
//!
//! ```text
//! cargo run --example box_jenkins
//! ```

use orion_dtn::arma::{acf, fit_batch, pacf, simulate_arma, stationarity_check, ArmaParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let truth = ArmaParams::new(30.0, 0.5, 0.2, 0.3, 4.0);
    let xs = simulate_arma(&truth, 5000, 11)?;

    let report = stationarity_check(&xs, 4, 3.0)?;
    println!("stationarity: {report:?}");

    let rho = acf(&xs, 8)?;
    let alpha = pacf(&rho, 8)?;
    println!("lag      acf     pacf");
    for k in 1..=8 {
        println!("{k:>3} {:>8.3} {:>8.3}", rho[k], alpha[k - 1]);
    }

    // Yule-Walker folds most of the MA term into the AR coefficients
    let fit = fit_batch(&xs)?;
    println!("true:   {truth:?}");
    println!("fitted: {fit:?}");
    Ok(())
}
