//! A reduced experiment grid with the comparison summary.
//!
//! ```text
//! cargo run --release --example experiment_matrix
//! ```

use orion_dtn::experiment::{parse_config, render_summary, run_matrix, summarize, write_results_csv};

const CONFIG: &str = "
protocols = orion, prophet, epidemic
nodes = 30, 70
speeds = 5, 20
seeds = 1..4
duration = 300
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let matrix = parse_config(CONFIG)?;
    let rows = run_matrix(&matrix)?;
    write_results_csv(&rows, std::io::stdout().lock())?;
    println!();
    print!("{}", render_summary(&summarize(&rows)));
    Ok(())
}
