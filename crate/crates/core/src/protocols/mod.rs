//! Routing decision engines.
//!
//! Every protocol answers the same question through [`route`]: given what a
//! node knows right now, what should happen to one queued packet? ORION keeps
//! a single custodian per packet and hands it off; PRoPHET and Epidemic
//! replicate.

mod epidemic;
mod orion;
mod prophet;

pub use epidemic::epidemic_forward;
pub use orion::{f_opt, orion_forward, OrionParams};
pub use prophet::{prophet_forward, ProphetParams, ProphetState};

use std::fmt;
use std::str::FromStr;

use crate::contacts::ContactPrediction;
use crate::types::{NodeId, PacketId, Point};

/// Default hop limit for every packet.
pub const DEFAULT_TTL_HOPS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Protocol {
    Orion,
    Prophet,
    Epidemic,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::Orion, Protocol::Prophet, Protocol::Epidemic];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Orion => "orion",
            Protocol::Prophet => "prophet",
            Protocol::Epidemic => "epidemic",
        }
    }

    /// Whether the protocol keeps exactly one copy of each packet.
    pub fn is_single_copy(self) -> bool {
        matches!(self, Protocol::Orion)
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "orion" => Ok(Protocol::Orion),
            "prophet" => Ok(Protocol::Prophet),
            "epidemic" => Ok(Protocol::Epidemic),
            other => Err(format!("unknown protocol `{other}`")),
        }
    }
}

/// A pending hand-off to a predicted future neighbour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub next_hop: NodeId,
    pub predicted_start: f64,
    pub scheduled_at: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub id: PacketId,
    pub source: NodeId,
    pub dest: NodeId,
    /// Destination position, frozen when the packet is created.
    pub dest_pos: Point,
    pub created_at: f64,
    pub hop_count: u32,
    pub ttl_hops: u32,
    pub previous_hop: Option<NodeId>,
    pub schedule: Option<Schedule>,
}

impl Packet {
    pub fn new(
        id: PacketId,
        source: NodeId,
        dest: NodeId,
        dest_pos: Point,
        created_at: f64,
        ttl_hops: u32,
    ) -> Self {
        Self {
            id,
            source,
            dest,
            dest_pos,
            created_at,
            hop_count: 0,
            ttl_hops,
            previous_hop: None,
            schedule: None,
        }
    }

    pub fn scheduled_next_hop(&self) -> Option<NodeId> {
        self.schedule.map(|s| s.next_hop)
    }

    /// `false` once another transmission would exceed the hop limit.
    pub fn can_hop(&self) -> bool {
        self.hop_count < self.ttl_hops
    }

    /// The copy the receiver gets when `from` transmits this packet.
    pub fn transmitted_by(&self, from: NodeId) -> Packet {
        Packet {
            hop_count: self.hop_count + 1,
            previous_hop: Some(from),
            schedule: None,
            ..self.clone()
        }
    }
}

/// What a node knows about a connected neighbour from its HELLOs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborSnapshot {
    pub id: NodeId,
    pub pos: Point,
    /// Position advertised one step earlier.
    pub prev_pos: Point,
}

/// Which ORION rule produced a transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// The destination itself is connected.
    Delivery,
    /// Closest connected neighbour, strictly closer than the holder.
    Closest,
    /// Connected neighbour whose last move shortened its distance the most.
    Advancing,
    /// The scheduled neighbour came into contact and nobody closer was around.
    Rendezvous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForwardDecision {
    Send { to: NodeId, criterion: Criterion },
    Schedule { to: NodeId, predicted_start: f64 },
    /// Keep the packet and its current schedule.
    Wait,
    /// Keep the packet with no schedule.
    Store,
}

/// Read access to other nodes' routing state.
pub trait PeerView {
    fn holds(&self, peer: NodeId, packet: PacketId) -> bool;
    fn delivery_probability(&self, peer: NodeId, dest: NodeId) -> f64;
}

/// Everything a node may consult when routing one packet.
pub struct RoutingContext<'a> {
    pub self_id: NodeId,
    pub self_pos: Point,
    pub now: f64,
    pub delta_t: f64,
    /// Connected neighbours in ascending id order.
    pub connected: &'a [NeighborSnapshot],
    /// Neighbours with a usable contact prediction (ORION only).
    pub estimated: &'a [(NodeId, ContactPrediction)],
    /// The node's own delivery probabilities (PRoPHET only).
    pub prophet: Option<&'a ProphetState>,
    pub peers: &'a dyn PeerView,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RoutingParams {
    pub orion: OrionParams,
    pub prophet: ProphetParams,
}

/// Outcome of routing one packet at one node.
#[derive(Debug, Clone, PartialEq)]
pub enum RoutingAction {
    /// Move the single copy to `to`.
    Handoff { to: NodeId, criterion: Criterion },
    /// Give a copy to each listed neighbour and keep ours.
    Replicate(Vec<NodeId>),
    Schedule { to: NodeId, predicted_start: f64 },
    Wait,
    Store,
}

pub fn route(
    protocol: Protocol,
    params: &RoutingParams,
    ctx: &RoutingContext<'_>,
    pk: &Packet,
) -> RoutingAction {
    match protocol {
        Protocol::Orion => {
            match orion_forward(ctx.self_pos, pk, ctx.connected, ctx.estimated, ctx.now, ctx.delta_t, &params.orion) {
                ForwardDecision::Send { to, criterion } => RoutingAction::Handoff { to, criterion },
                ForwardDecision::Schedule { to, predicted_start } => {
                    RoutingAction::Schedule { to, predicted_start }
                }
                ForwardDecision::Wait => RoutingAction::Wait,
                ForwardDecision::Store => RoutingAction::Store,
            }
        }
        Protocol::Prophet => {
            if ctx.connected.iter().any(|n| n.id == pk.dest) {
                return RoutingAction::Replicate(vec![pk.dest]);
            }
            let Some(own) = ctx.prophet else {
                return RoutingAction::Store;
            };
            let targets: Vec<NodeId> = ctx
                .connected
                .iter()
                .map(|n| n.id)
                .filter(|&peer| !ctx.peers.holds(peer, pk.id))
                .filter(|&peer| {
                    prophet_forward(own, pk, peer, ctx.peers.delivery_probability(peer, pk.dest))
                })
                .collect();
            if targets.is_empty() {
                RoutingAction::Store
            } else {
                RoutingAction::Replicate(targets)
            }
        }
        Protocol::Epidemic => {
            let ids: Vec<NodeId> = ctx.connected.iter().map(|n| n.id).collect();
            let targets = epidemic_forward(pk, &ids, |peer| ctx.peers.holds(peer, pk.id));
            if targets.is_empty() {
                RoutingAction::Store
            } else {
                RoutingAction::Replicate(targets)
            }
        }
    }
}
