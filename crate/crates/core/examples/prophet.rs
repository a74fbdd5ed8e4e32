//! PRoPHET delivery predictabilities across a few encounters.
//!
//! ```text
//! cargo run --example prophet
//! ```

use orion_dtn::protocols::{ProphetParams, ProphetState};
use orion_dtn::types::NodeId;

fn encounter(a: &mut ProphetState, b: &mut ProphetState, now: f64) {
    a.age(now);
    b.age(now);
    a.update(b.owner());
    b.update(a.owner());
    let (pa, pb) = (a.probabilities().clone(), b.probabilities().clone());
    a.transitivity(b.owner(), &pb);
    b.transitivity(a.owner(), &pa);
}

fn main() {
    let params = ProphetParams::default();
    let mut nodes: Vec<ProphetState> = (0..3).map(|i| ProphetState::new(NodeId(i), params)).collect();

    // 1 meets 2 twice, then 0 meets 1
    for (t, a, b) in [(0.0, 1, 2), (20.0, 1, 2), (30.0, 0, 1)] {
        let (lo, hi) = nodes.split_at_mut(b);
        encounter(&mut lo[a], &mut hi[0], t);
    }
    for n in &mut nodes {
        n.age(60.0);
        println!("node {}: {:?}", n.owner(), n.probabilities());
    }
}
