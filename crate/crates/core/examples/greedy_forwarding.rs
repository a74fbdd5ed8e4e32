//! One ORION forwarding decision under each rule.
//!
//! ```text
//! cargo run --example greedy_forwarding
//! ```

use orion_dtn::contacts::ContactPrediction;
use orion_dtn::protocols::{orion_forward, NeighborSnapshot, OrionParams, Packet};
use orion_dtn::types::{NodeId, PacketId, Point};

fn neighbor(id: u32, pos: (f64, f64), prev: (f64, f64)) -> NeighborSnapshot {
    NeighborSnapshot {
        id: NodeId(id),
        pos: Point::new(pos.0, pos.1),
        prev_pos: Point::new(prev.0, prev.1),
    }
}

fn main() {
    let params = OrionParams::default();
    let here = Point::new(0.0, 0.0);
    let pk = Packet::new(PacketId(1), NodeId(0), NodeId(99), Point::new(100.0, 0.0), 0.0, 64);

    let closer = [neighbor(1, (60.0, 0.0), (60.0, 0.0)), neighbor(2, (30.0, 0.0), (30.0, 0.0))];
    println!("closest:   {:?}", orion_forward(here, &pk, &closer, &[], 10.0, 1.0, &params));

    // nobody closer, but node 3 is heading toward the destination
    let moving = [neighbor(3, (-20.0, 0.0), (-30.0, 0.0)), neighbor(4, (-10.0, 0.0), (-5.0, 0.0))];
    println!("advancing: {:?}", orion_forward(here, &pk, &moving, &[], 10.0, 1.0, &params));

    let estimated = [
        (NodeId(5), ContactPrediction { next_contact_start: 30.0, expected_duration: 10.0, confidence_n: 2 }),
        (NodeId(6), ContactPrediction { next_contact_start: 12.0, expected_duration: 5.0, confidence_n: 8 }),
    ];
    let decision = orion_forward(here, &pk, &[], &estimated, 10.0, 1.0, &params);
    println!("schedule:  {decision:?}");

    println!("store:     {:?}", orion_forward(here, &pk, &[], &[], 10.0, 1.0, &params));
}
