//! Turns a HELLO trace into contact / non-contact series and asks for the
//! next contact.
//!
//! ```text
//! cargo run --example contact_tracking
//! ```

use orion_dtn::contacts::NeighborContactState;
use orion_dtn::types::NodeId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut link = NeighborContactState::new(NodeId(9), 1.0);

    // a bus passing every 90 s, in range for 15..25 s
    let mut t = 0u32;
    for lap in 0..8u32 {
        let on = 15 + (lap * 7) % 11;
        for _ in 0..on {
            link.record_hello(f64::from(t))?;
            link.tick(f64::from(t));
            t += 1;
        }
        for _ in on..90 {
            link.tick(f64::from(t));
            t += 1;
        }
    }

    println!("contacts:     {:?}", link.contact_series().values());
    println!("non-contacts: {:?}", link.non_contact_series().values());
    let now = f64::from(t);
    if let Some(p) = link.predict_next_contact(now) {
        println!(
            "now={now}: next contact at {:.1}, lasting {:.1} s ({} contacts seen)",
            p.next_contact_start, p.expected_duration, p.confidence_n
        );
    }
    Ok(())
}
