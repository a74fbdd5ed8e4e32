//! Steps a scenario by hand, follows one packet through the event log and
//! dumps a node's contact trace.
//!
//! ```text
//! cargo run --release --example event_log
//! ```

use orion_dtn::sim::{write_events_csv, EventKind, ScenarioConfig, Simulation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut sim = Simulation::new(ScenarioConfig {
        node_count: 40,
        duration: 120.0,
        seed: 5,
        ..ScenarioConfig::default()
    })?;
    println!("source {} -> destination {}", sim.source(), sim.destination());

    while sim.step() {
        if sim.step_index() % 30 == 0 {
            let in_flight = sim.created_packets().filter(|&p| !sim.is_delivered(p)).count();
            println!("t={:>4}: {in_flight} packets in flight", sim.now());
        }
    }

    let first = sim
        .events()
        .iter()
        .find(|e| e.kind == EventKind::Delivered)
        .map(|e| e.packet_id);
    if let Some(id) = first {
        let trail: Vec<_> = sim.events().iter().filter(|e| e.packet_id == id).cloned().collect();
        write_events_csv(&trail, std::io::stdout().lock())?;
        for e in trail.iter().filter(|e| e.kind == EventKind::Sent) {
            println!("  {:?} hop {}: {:?} -> {:?}", e.criterion, e.hops, e.from_dist, e.to_dist);
        }
    }

    let src = &sim.nodes()[sim.source().index()];
    println!("\ncontact trace of node {}:", src.id());
    src.write_contact_trace(std::io::stdout().lock())?;
    println!("{:?}", sim.metrics());
    Ok(())
}
