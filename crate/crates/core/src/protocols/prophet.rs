use std::collections::BTreeMap;

use super::Packet;
use crate::types::NodeId;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProphetParams {
    pub l_encounter: f64,
    /// Aging factor per `time_unit`.
    pub gamma: f64,
    pub beta: f64,
    /// Seconds per aging unit.
    pub time_unit: f64,
}

impl Default for ProphetParams {
    fn default() -> Self {
        Self {
            l_encounter: 0.75,
            gamma: 0.98,
            beta: 0.25,
            time_unit: 1.0,
        }
    }
}

/// Delivery predictabilities held by one node.
#[derive(Debug, Clone, PartialEq)]
pub struct ProphetState {
    owner: NodeId,
    probabilities: BTreeMap<NodeId, f64>,
    last_aged_at: f64,
    params: ProphetParams,
}

impl ProphetState {
    pub fn new(owner: NodeId, params: ProphetParams) -> Self {
        Self {
            owner,
            probabilities: BTreeMap::new(),
            last_aged_at: 0.0,
            params,
        }
    }

    pub fn owner(&self) -> NodeId {
        self.owner
    }

    pub fn params(&self) -> &ProphetParams {
        &self.params
    }

    pub fn last_aged_at(&self) -> f64 {
        self.last_aged_at
    }

    pub fn probabilities(&self) -> &BTreeMap<NodeId, f64> {
        &self.probabilities
    }

    /// `P(owner, dest)`, zero for unknown destinations.
    pub fn probability(&self, dest: NodeId) -> f64 {
        self.probabilities.get(&dest).copied().unwrap_or(0.0)
    }

    pub fn set_probability(&mut self, dest: NodeId, p: f64) {
        self.probabilities.insert(dest, p.clamp(0.0, 1.0));
    }

    /// Direct encounter: `P += (1 - P) * L_encounter`.
    pub fn update(&mut self, encountered: NodeId) {
        debug_assert_ne!(encountered, self.owner);
        let l = self.params.l_encounter;
        let p = self.probabilities.entry(encountered).or_insert(0.0);
        *p += (1.0 - *p) * l;
    }

    /// Multiplies every predictability by `gamma` once per whole time unit
    /// elapsed since the last aging. Partial units carry over.
    pub fn age(&mut self, now: f64) {
        let elapsed = now - self.last_aged_at;
        if elapsed < self.params.time_unit {
            return;
        }
        let units = (elapsed / self.params.time_unit).floor() as u64;
        self.age_units(units);
        self.last_aged_at += units as f64 * self.params.time_unit;
    }

    /// Applies `units` aging steps. Repeated multiplication keeps
    /// `age_units(a); age_units(b)` bit-identical to `age_units(a + b)`.
    pub fn age_units(&mut self, units: u64) {
        let gamma = self.params.gamma;
        for p in self.probabilities.values_mut() {
            for _ in 0..units {
                if *p == 0.0 {
                    break;
                }
                *p *= gamma;
            }
        }
    }

    /// Transitive update through `peer` using its predictabilities:
    /// `P(i,k) += (1 - P(i,k)) * P(i,j) * P(j,k) * beta`.
    pub fn transitivity(&mut self, peer: NodeId, peer_probs: &BTreeMap<NodeId, f64>) {
        let p_ij = self.probability(peer);
        self.apply_transitivity(p_ij, peer_probs);
    }

    pub fn apply_transitivity(&mut self, p_ij: f64, peer_probs: &BTreeMap<NodeId, f64>) {
        let beta = self.params.beta;
        for (&k, &p_jk) in peer_probs {
            if k == self.owner || p_jk == 0.0 {
                continue;
            }
            let p = self.probabilities.entry(k).or_insert(0.0);
            *p += (1.0 - *p) * p_ij * p_jk * beta;
        }
    }
}

/// Whether to hand a replica to `peer`, whose predictability for the packet's
/// destination is `peer_p_dest`. The destination itself always gets it.
pub fn prophet_forward(self_state: &ProphetState, pk: &Packet, peer_id: NodeId, peer_p_dest: f64) -> bool {
    peer_id == pk.dest || peer_p_dest > self_state.probability(pk.dest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{PacketId, Point};
    use proptest::prelude::*;

    fn state() -> ProphetState {
        ProphetState::new(NodeId(0), ProphetParams::default())
    }

    #[test]
    fn update_examples() {
        let mut s = state();
        s.update(NodeId(1));
        assert!((s.probability(NodeId(1)) - 0.75).abs() < 1e-12);
        s.set_probability(NodeId(2), 0.5);
        s.update(NodeId(2));
        assert!((s.probability(NodeId(2)) - 0.875).abs() < 1e-12);
        s.set_probability(NodeId(3), 1.0);
        s.update(NodeId(3));
        assert_eq!(s.probability(NodeId(3)), 1.0);
    }

    #[test]
    fn aging_examples() {
        let mut s = state();
        s.set_probability(NodeId(1), 0.8);
        s.age(10.0);
        assert!((s.probability(NodeId(1)) - 0.8 * 0.98f64.powi(10)).abs() < 1e-12);
        assert!((s.probability(NodeId(1)) - 0.65366).abs() < 1e-5);
        assert_eq!(s.last_aged_at(), 10.0);
        let before = s.clone();
        s.age(10.5);
        assert_eq!(s, before);
        s.age(11.0);
        assert_eq!(s.last_aged_at(), 11.0);
    }

    #[test]
    fn aging_decays_to_zero() {
        let mut s = state();
        s.set_probability(NodeId(1), 0.9);
        let mut last = 0.9;
        for t in 1..200 {
            s.age(f64::from(t * 10));
            let p = s.probability(NodeId(1));
            assert!(p <= last);
            last = p;
        }
        assert!(last < 1e-15);
    }

    #[test]
    fn transitivity_examples() {
        let peer = NodeId(1);
        let k = NodeId(2);
        let mut s = state();
        s.apply_transitivity(1.0, &BTreeMap::from([(k, 1.0)]));
        assert!((s.probability(k) - 0.25).abs() < 1e-12);

        let mut s = state();
        s.set_probability(k, 0.3);
        s.apply_transitivity(0.9, &BTreeMap::from([(k, 0.0)]));
        assert_eq!(s.probability(k), 0.3);

        let mut s = state();
        s.set_probability(peer, 0.8);
        s.set_probability(k, 0.4);
        s.transitivity(peer, &BTreeMap::from([(k, 0.5)]));
        assert!((s.probability(k) - 0.46).abs() < 1e-12);
    }

    #[test]
    fn forward_rule() {
        let mut s = state();
        let pk = Packet::new(PacketId(1), NodeId(0), NodeId(9), Point::default(), 0.0, 64);
        s.set_probability(NodeId(9), 0.2);
        assert!(prophet_forward(&s, &pk, NodeId(3), 0.6));
        s.set_probability(NodeId(9), 0.6);
        assert!(!prophet_forward(&s, &pk, NodeId(3), 0.6));
        assert!(prophet_forward(&s, &pk, NodeId(9), 0.0));
    }

    proptest! {
        #[test]
        fn aging_composes_exactly(p in 0.0f64..=1.0, a in 0u64..300, b in 0u64..300) {
            let mut split = state();
            split.set_probability(NodeId(1), p);
            let mut whole = split.clone();
            split.age_units(a);
            split.age_units(b);
            whole.age_units(a + b);
            prop_assert_eq!(split.probability(NodeId(1)), whole.probability(NodeId(1)));
        }
    }
}
