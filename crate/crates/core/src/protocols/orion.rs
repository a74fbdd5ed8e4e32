use std::cmp::Ordering;

use super::{Criterion, ForwardDecision, NeighborSnapshot, Packet};
use crate::contacts::ContactPrediction;
use crate::types::{NodeId, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrionParams {
    /// Weight of delivery speed against delivery certainty in [`f_opt`].
    pub weight_speed: f64,
    /// Saturation constant for the certainty term.
    pub confidence_k: f64,
    /// Minimum patience for a scheduled packet, in periods.
    pub patience_periods: f64,
    /// Patience as a share of the predicted wait.
    pub patience_fraction: f64,
}

impl Default for OrionParams {
    fn default() -> Self {
        Self {
            weight_speed: 0.5,
            confidence_k: 5.0,
            patience_periods: 5.0,
            patience_fraction: 0.25,
        }
    }
}

/// Scores a predicted future neighbour; higher is better.
///
/// `weight_speed / (1 + wait) + (1 - weight_speed) * n / (n + k)` where
/// `wait` is the time until the predicted contact and `n` the number of
/// contacts behind the prediction.
pub fn f_opt(prediction: &ContactPrediction, now: f64, weight_speed: f64, confidence_k: f64) -> f64 {
    let wait = (prediction.next_contact_start - now).max(0.0);
    let n = f64::from(prediction.confidence_n);
    weight_speed / (1.0 + wait) + (1.0 - weight_speed) * n / (n + confidence_k)
}

/// Lowest id wins among equal keys.
fn best_by<T, F>(items: impl Iterator<Item = (NodeId, T)>, mut better: F) -> Option<(NodeId, T)>
where
    F: FnMut(&T, &T) -> Ordering,
{
    let mut best: Option<(NodeId, T)> = None;
    for (id, key) in items {
        best = match best {
            None => Some((id, key)),
            Some((bid, bkey)) => match better(&key, &bkey) {
                Ordering::Greater => Some((id, key)),
                Ordering::Less => Some((bid, bkey)),
                Ordering::Equal if id < bid => Some((id, key)),
                Ordering::Equal => Some((bid, bkey)),
            },
        };
    }
    best
}

fn closest(self_pos: Point, pk: &Packet, connected: &[NeighborSnapshot]) -> Option<NodeId> {
    let own = self_pos.distance(pk.dest_pos);
    best_by(
        connected
            .iter()
            .filter(|n| Some(n.id) != pk.previous_hop)
            .map(|n| (n.id, n.pos.distance(pk.dest_pos)))
            .filter(|(_, d)| *d < own),
        |a, b| b.total_cmp(a),
    )
    .map(|(id, _)| id)
}

fn most_advancing(pk: &Packet, connected: &[NeighborSnapshot]) -> Option<NodeId> {
    best_by(
        connected
            .iter()
            .filter(|n| Some(n.id) != pk.previous_hop)
            .map(|n| {
                let adv = n.prev_pos.distance(pk.dest_pos) - n.pos.distance(pk.dest_pos);
                (n.id, adv)
            })
            .filter(|(_, adv)| *adv > 0.0),
        |a, b| a.total_cmp(b),
    )
    .map(|(id, _)| id)
}

fn best_future(
    pk: &Packet,
    connected: &[NeighborSnapshot],
    estimated: &[(NodeId, ContactPrediction)],
    now: f64,
    params: &OrionParams,
) -> Option<(NodeId, f64)> {
    best_by(
        estimated
            .iter()
            .filter(|(id, _)| Some(*id) != pk.previous_hop)
            .filter(|(id, _)| connected.iter().all(|n| n.id != *id))
            .map(|(id, pred)| {
                let score = f_opt(pred, now, params.weight_speed, params.confidence_k);
                (*id, (score, pred.next_contact_start))
            }),
        |a, b| a.0.total_cmp(&b.0),
    )
    .map(|(id, (_, start))| (id, start))
}

fn unscheduled(
    self_pos: Point,
    pk: &Packet,
    connected: &[NeighborSnapshot],
    estimated: &[(NodeId, ContactPrediction)],
    now: f64,
    params: &OrionParams,
) -> ForwardDecision {
    if let Some(to) = closest(self_pos, pk, connected) {
        return ForwardDecision::Send {
            to,
            criterion: Criterion::Closest,
        };
    }
    if let Some(to) = most_advancing(pk, connected) {
        return ForwardDecision::Send {
            to,
            criterion: Criterion::Advancing,
        };
    }
    if let Some((to, predicted_start)) = best_future(pk, connected, estimated, now, params) {
        return ForwardDecision::Schedule { to, predicted_start };
    }
    ForwardDecision::Store
}

/// ORION forwarding decision for one packet held at `self_pos`.
///
/// In order: deliver if the destination is connected; send to the connected
/// neighbour closest to the destination if it is strictly closer than the
/// holder; otherwise to the neighbour whose last move brought it closest
/// towards the destination; otherwise schedule the packet for the best
/// predicted future neighbour; otherwise store it. The previous hop is never
/// chosen.
///
/// A scheduled packet waits until its next hop shows up. When it does, the
/// closest strictly-closer connected neighbour still takes precedence. When
/// the predicted contact is overdue beyond the patience window the schedule
/// is dropped and the decision starts over.
pub fn orion_forward(
    self_pos: Point,
    pk: &Packet,
    connected: &[NeighborSnapshot],
    estimated: &[(NodeId, ContactPrediction)],
    now: f64,
    delta_t: f64,
    params: &OrionParams,
) -> ForwardDecision {
    if connected.iter().any(|n| n.id == pk.dest) {
        return ForwardDecision::Send {
            to: pk.dest,
            criterion: Criterion::Delivery,
        };
    }

    if let Some(s) = pk.schedule {
        if connected.iter().any(|n| n.id == s.next_hop) {
            if let Some(to) = closest(self_pos, pk, connected) {
                return ForwardDecision::Send {
                    to,
                    criterion: Criterion::Closest,
                };
            }
            if Some(s.next_hop) != pk.previous_hop {
                return ForwardDecision::Send {
                    to: s.next_hop,
                    criterion: Criterion::Rendezvous,
                };
            }
        } else {
            let predicted_wait = (s.predicted_start - s.scheduled_at).max(0.0);
            let patience =
                (params.patience_periods * delta_t).max(params.patience_fraction * predicted_wait);
            if now - s.predicted_start <= patience {
                return ForwardDecision::Wait;
            }
        }
    }

    unscheduled(self_pos, pk, connected, estimated, now, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::Schedule;
    use crate::types::PacketId;

    fn packet(dest_pos: Point) -> Packet {
        Packet::new(PacketId(1), NodeId(0), NodeId(99), dest_pos, 0.0, 64)
    }

    fn still(id: u32, x: f64, y: f64) -> NeighborSnapshot {
        NeighborSnapshot {
            id: NodeId(id),
            pos: Point::new(x, y),
            prev_pos: Point::new(x, y),
        }
    }

    fn pred(start: f64, n: u32) -> ContactPrediction {
        ContactPrediction {
            next_contact_start: start,
            expected_duration: 10.0,
            confidence_n: n,
        }
    }

    fn decide(pk: &Packet, connected: &[NeighborSnapshot], est: &[(NodeId, ContactPrediction)], now: f64) -> ForwardDecision {
        orion_forward(Point::new(0.0, 0.0), pk, connected, est, now, 1.0, &OrionParams::default())
    }

    #[test]
    fn closest_neighbour_wins() {
        let pk = packet(Point::new(100.0, 0.0));
        let d = decide(&pk, &[still(1, 50.0, 0.0), still(2, 80.0, 10.0)], &[], 0.0);
        assert_eq!(
            d,
            ForwardDecision::Send {
                to: NodeId(2),
                criterion: Criterion::Closest
            }
        );
    }

    #[test]
    fn advancing_neighbour_when_none_closer() {
        // dest (0,0) from self (0,0) is distance 0: nobody can be closer
        let pk = packet(Point::new(0.0, 0.0));
        let mover = NeighborSnapshot {
            id: NodeId(3),
            pos: Point::new(40.0, 40.0),
            prev_pos: Point::new(50.0, 50.0),
        };
        let receding = NeighborSnapshot {
            id: NodeId(1),
            pos: Point::new(10.0, 0.0),
            prev_pos: Point::new(5.0, 0.0),
        };
        let d = decide(&pk, &[receding, mover], &[], 0.0);
        assert_eq!(
            d,
            ForwardDecision::Send {
                to: NodeId(3),
                criterion: Criterion::Advancing
            }
        );
        let adv = Point::new(50.0, 50.0).distance(Point::new(0.0, 0.0))
            - Point::new(40.0, 40.0).distance(Point::new(0.0, 0.0));
        assert!((adv - 14.142135623730951).abs() < 1e-9);
    }

    #[test]
    fn falls_through_to_schedule_then_store() {
        let pk = packet(Point::new(100.0, 0.0));
        let d = decide(&pk, &[], &[(NodeId(5), pred(12.0, 3))], 10.0);
        assert_eq!(
            d,
            ForwardDecision::Schedule {
                to: NodeId(5),
                predicted_start: 12.0
            }
        );
        assert_eq!(decide(&pk, &[], &[], 10.0), ForwardDecision::Store);
    }

    #[test]
    fn destination_short_circuit() {
        let pk = packet(Point::new(100.0, 0.0));
        let d = decide(&pk, &[still(2, 80.0, 0.0), still(99, -300.0, 0.0)], &[], 0.0);
        assert_eq!(
            d,
            ForwardDecision::Send {
                to: NodeId(99),
                criterion: Criterion::Delivery
            }
        );
    }

    #[test]
    fn never_back_to_previous_hop() {
        let mut pk = packet(Point::new(100.0, 0.0));
        pk.previous_hop = Some(NodeId(2));
        let d = decide(&pk, &[still(2, 80.0, 0.0), still(1, 50.0, 0.0)], &[], 0.0);
        assert_eq!(
            d,
            ForwardDecision::Send {
                to: NodeId(1),
                criterion: Criterion::Closest
            }
        );
        let d = decide(&pk, &[still(2, 80.0, 0.0)], &[(NodeId(2), pred(5.0, 9))], 0.0);
        assert_eq!(d, ForwardDecision::Store);
    }

    #[test]
    fn ties_go_to_lowest_id() {
        let pk = packet(Point::new(100.0, 0.0));
        let d = decide(&pk, &[still(4, 50.0, 10.0), still(2, 50.0, -10.0)], &[], 0.0);
        assert_eq!(
            d,
            ForwardDecision::Send {
                to: NodeId(2),
                criterion: Criterion::Closest
            }
        );
    }

    fn scheduled(next: u32, predicted_start: f64, at: f64) -> Packet {
        let mut pk = packet(Point::new(100.0, 0.0));
        pk.schedule = Some(Schedule {
            next_hop: NodeId(next),
            predicted_start,
            scheduled_at: at,
        });
        pk
    }

    #[test]
    fn scheduled_packet_waits_within_patience() {
        let pk = scheduled(5, 20.0, 10.0);
        assert_eq!(decide(&pk, &[], &[], 15.0), ForwardDecision::Wait);
        // overdue by 4 < max(5, 2.5)
        assert_eq!(decide(&pk, &[], &[], 24.0), ForwardDecision::Wait);
        // overdue by 6: schedule dropped, nothing else to do
        assert_eq!(decide(&pk, &[], &[], 26.0), ForwardDecision::Store);
    }

    #[test]
    fn scheduled_neighbour_arrives() {
        let pk = scheduled(5, 20.0, 10.0);
        let d = decide(&pk, &[still(5, -10.0, 0.0)], &[], 20.0);
        assert_eq!(
            d,
            ForwardDecision::Send {
                to: NodeId(5),
                criterion: Criterion::Rendezvous
            }
        );
        let d = decide(&pk, &[still(5, -10.0, 0.0), still(6, 30.0, 0.0)], &[], 20.0);
        assert_eq!(
            d,
            ForwardDecision::Send {
                to: NodeId(6),
                criterion: Criterion::Closest
            }
        );
    }

    #[test]
    fn f_opt_values() {
        let s = f_opt(&pred(9.0, 5), 0.0, 0.5, 5.0);
        assert!((s - 0.30).abs() < 1e-12);
        let s = f_opt(&pred(0.0, 1_000_000_000), 0.0, 0.5, 5.0);
        assert!((s - 1.0).abs() < 1e-8);
        assert!(f_opt(&pred(3.0, 4), 0.0, 0.5, 5.0) > f_opt(&pred(30.0, 4), 0.0, 0.5, 5.0));
    }

    #[test]
    fn earlier_contact_is_scheduled() {
        let pk = packet(Point::new(100.0, 0.0));
        let est = [(NodeId(1), pred(30.0, 4)), (NodeId(2), pred(3.0, 4))];
        assert_eq!(
            decide(&pk, &[], &est, 0.0),
            ForwardDecision::Schedule {
                to: NodeId(2),
                predicted_start: 3.0
            }
        );
    }
}
