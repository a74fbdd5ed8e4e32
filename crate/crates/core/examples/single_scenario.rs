//! One scenario per protocol on the same trace.
//!
//! ```text
//! cargo run --release --example single_scenario [nodes] [speed] [seed]
//! ```

use orion_dtn::protocols::Protocol;
use orion_dtn::sim::{run_scenario, ScenarioConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let nodes = args.first().map_or(Ok(50), |s| s.parse())?;
    let speed = args.get(1).map_or(Ok(10.0), |s| s.parse())?;
    let seed = args.get(2).map_or(Ok(1), |s| s.parse())?;

    for protocol in Protocol::ALL {
        let cfg = ScenarioConfig {
            node_count: nodes,
            speed,
            seed,
            protocol,
            ..ScenarioConfig::default()
        };
        let m = run_scenario(&cfg)?;
        println!(
            "{protocol:<8} psr={:.3} hops={:?} fpa={:?} eed={:?}",
            m.psr, m.avg_hop_count, m.first_packet_arrival, m.avg_e2e_delay
        );
    }
    Ok(())
}
