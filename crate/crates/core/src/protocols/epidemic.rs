use super::Packet;
use crate::types::NodeId;

/// Every connected neighbour that does not already hold the packet.
pub fn epidemic_forward<F>(_pk: &Packet, connected: &[NodeId], holds: F) -> Vec<NodeId>
where
    F: Fn(NodeId) -> bool,
{
    connected.iter().copied().filter(|&n| !holds(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{PacketId, Point};

    #[test]
    fn floods_to_missing_holders() {
        let pk = Packet::new(PacketId(0), NodeId(0), NodeId(5), Point::default(), 0.0, 64);
        let ns = [NodeId(1), NodeId(2), NodeId(3)];
        assert_eq!(epidemic_forward(&pk, &ns, |_| false), ns.to_vec());
        assert!(epidemic_forward(&pk, &ns, |_| true).is_empty());
        assert!(epidemic_forward(&pk, &[], |_| false).is_empty());
        assert_eq!(epidemic_forward(&pk, &ns, |n| n == NodeId(2)), vec![NodeId(1), NodeId(3)]);
    }
}
