//! Online ARMA forecasting of a noisy duration series, compared with the
//! last-value predictor.
//!
//! ```text
//! cargo run --example contact_model
//! ```

use orion_dtn::arma::{simulate_arma, ArmaOnlineState, ArmaParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let series = simulate_arma(&ArmaParams::new(40.0, 0.6, 0.1, 0.2, 9.0), 400, 3)?;
    let mut model = ArmaOnlineState::new(1.0);
    let (mut sq_model, mut sq_naive) = (0.0, 0.0);
    let mut prev = None;

    for (i, &y) in series.iter().enumerate() {
        let forecast = model.forecast_next();
        if let Some(p) = prev {
            sq_model += (forecast - y).powi(2);
            sq_naive += (p - y) * (p - y);
        }
        if i % 50 == 0 {
            println!("i={i:>3} forecast={forecast:>7.2} actual={y:>7.2}");
        }
        model.update(y);
        prev = Some(y);
    }

    let n = (series.len() - 1) as f64;
    println!("one-step MSE: online {:.3}, last value {:.3}", sq_model / n, sq_naive / n);
    println!("final parameters: {:?}", model.params());
    Ok(())
}
