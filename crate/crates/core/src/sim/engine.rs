use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{self, Write};

use rand::Rng;

use super::config::ScenarioConfig;
use super::metrics::{collect_metrics, Event, EventKind, MetricsReport};
use super::mobility::{Arena, Mobility, NodeKind};
use super::rng::{stream_rng, SimRng, Stream};
use super::SimError;
use crate::contacts::{ContactPrediction, NeighborContactState};
use crate::protocols::{
    route, Criterion, NeighborSnapshot, Packet, PeerView, Protocol, ProphetState, RoutingAction,
    RoutingContext, Schedule,
};
use crate::types::{NodeId, PacketId, Point};

/// Symmetric neighbour lists, each sorted by id.
pub type Adjacency = Vec<Vec<NodeId>>;

/// Unit-disk connectivity: `i` and `j` are adjacent iff `i != j` and their
/// distance is at most `radio_range`.
pub fn compute_connectivity(positions: &[Point], radio_range: f64) -> Adjacency {
    let n = positions.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if positions[i].distance(positions[j]) <= radio_range {
                adj[i].push(NodeId(j as u32));
                adj[j].push(NodeId(i as u32));
            }
        }
    }
    // j-loop pushes ascending ids for i, and i ascends for j
    adj
}

#[derive(Debug, Clone)]
struct QueuedPacket {
    packet: Packet,
    received_step: Option<u64>,
    /// Already logged as stored since its last state change.
    idle: bool,
    /// Hop limit reached: held but never forwarded again.
    expired: bool,
}

#[derive(Debug, Clone)]
pub struct NodeState {
    id: NodeId,
    pos: Point,
    prev_pos: Point,
    mobility: Mobility,
    rng: SimRng,
    contacts: BTreeMap<NodeId, NeighborContactState>,
    prophet: Option<ProphetState>,
    queue: Vec<QueuedPacket>,
    seen: HashSet<PacketId>,
}

impl NodeState {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn kind(&self) -> NodeKind {
        self.mobility.kind()
    }

    pub fn pos(&self) -> Point {
        self.pos
    }

    pub fn prev_pos(&self) -> Point {
        self.prev_pos
    }

    pub fn current_speed(&self) -> f64 {
        self.mobility.current_speed()
    }

    pub fn contacts(&self) -> &BTreeMap<NodeId, NeighborContactState> {
        &self.contacts
    }

    pub fn prophet(&self) -> Option<&ProphetState> {
        self.prophet.as_ref()
    }

    pub fn queue(&self) -> impl Iterator<Item = &Packet> {
        self.queue.iter().map(|q| &q.packet)
    }

    pub fn holds(&self, id: PacketId) -> bool {
        self.queue.iter().any(|q| q.packet.id == id)
    }

    /// Writes this node's recorded contact series as
    /// `neighbor_id,kind,index,duration_s` rows.
    pub fn write_contact_trace<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "neighbor_id,kind,index,duration_s")?;
        for (neighbor, state) in &self.contacts {
            for (kind, index, d) in state.recorded() {
                writeln!(out, "{neighbor},{},{index},{d}", kind.label())?;
            }
        }
        Ok(())
    }
}

/// Moves a node by one step with its own generator.
pub fn step_mobility(node: &mut NodeState, delta_t: f64, arena: &Arena) {
    node.prev_pos = node.pos;
    node.pos = node.mobility.step(node.pos, delta_t, arena, &mut node.rng);
}

struct Peers<'a>(&'a [NodeState]);

impl PeerView for Peers<'_> {
    fn holds(&self, peer: NodeId, packet: PacketId) -> bool {
        self.0[peer.index()].seen.contains(&packet)
    }

    fn delivery_probability(&self, peer: NodeId, dest: NodeId) -> f64 {
        self.0[peer.index()]
            .prophet
            .as_ref()
            .map_or(0.0, |p| p.probability(dest))
    }
}

/// Fixed-step DTN simulation of one scenario.
///
/// Each step moves every node, recomputes connectivity, delivers HELLOs to
/// the contact trackers, runs PRoPHET encounters, emits traffic at the
/// source and finally lets every node, in ascending id order, route its
/// queued packets. A packet received during a step is not forwarded again
/// before the next one.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: ScenarioConfig,
    arena: Arena,
    nodes: Vec<NodeState>,
    source: NodeId,
    destination: NodeId,
    step: u64,
    total_steps: u64,
    adjacency: Adjacency,
    next_packet: u64,
    created: BTreeSet<PacketId>,
    delivered: BTreeSet<PacketId>,
    events: Vec<Event>,
}

impl Simulation {
    pub fn new(config: ScenarioConfig) -> Result<Self, SimError> {
        config.validate()?;
        let arena = Arena {
            width: config.area_width,
            height: config.area_height,
            speed: config.speed,
        };
        let n = config.node_count;
        let nodes = (0..n)
            .map(|i| {
                let id = NodeId(i as u32);
                let mut rng = stream_rng(config.seed, Stream::Node(id.0));
                let kind = if i < config.fixed_count {
                    NodeKind::Fixed
                } else if rng.random_bool(config.regular_fraction) {
                    NodeKind::Regular
                } else {
                    NodeKind::Random
                };
                let (mobility, pos) = Mobility::build(kind, &arena, &mut rng);
                NodeState {
                    id,
                    pos,
                    prev_pos: pos,
                    mobility,
                    rng,
                    contacts: BTreeMap::new(),
                    prophet: (config.protocol == Protocol::Prophet)
                        .then(|| ProphetState::new(id, config.routing.prophet)),
                    queue: Vec::new(),
                    seen: HashSet::new(),
                }
            })
            .collect();

        let mut setup = stream_rng(config.seed, Stream::Setup);
        let source = setup.random_range(0..n);
        let mut destination = setup.random_range(0..n - 1);
        if destination >= source {
            destination += 1;
        }

        Ok(Self {
            total_steps: config.total_steps(),
            arena,
            nodes,
            source: NodeId(source as u32),
            destination: NodeId(destination as u32),
            step: 0,
            adjacency: vec![Vec::new(); n],
            next_packet: 0,
            created: BTreeSet::new(),
            delivered: BTreeSet::new(),
            events: Vec::new(),
            config,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn now(&self) -> f64 {
        self.step as f64 * self.config.delta_t
    }

    pub fn step_index(&self) -> u64 {
        self.step
    }

    pub fn is_finished(&self) -> bool {
        self.step >= self.total_steps
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }

    pub fn created_packets(&self) -> impl Iterator<Item = PacketId> + '_ {
        self.created.iter().copied()
    }

    pub fn is_delivered(&self, id: PacketId) -> bool {
        self.delivered.contains(&id)
    }

    /// Nodes currently holding a copy of `id`.
    pub fn holders(&self, id: PacketId) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| n.holds(id))
            .map(|n| n.id)
            .collect()
    }

    pub fn metrics(&self) -> MetricsReport {
        collect_metrics(&self.events)
    }

    pub fn run_to_end(&mut self) {
        while self.step() {}
    }

    /// Advances one step; returns `false` once the run is complete.
    pub fn step(&mut self) -> bool {
        if self.is_finished() {
            return false;
        }
        self.step += 1;
        let now = self.now();
        let dt = self.config.delta_t;

        for node in &mut self.nodes {
            step_mobility(node, dt, &self.arena);
        }

        let positions: Vec<Point> = self.nodes.iter().map(|n| n.pos).collect();
        let adjacency = compute_connectivity(&positions, self.config.radio_range);
        let previous = std::mem::replace(&mut self.adjacency, adjacency);

        for (node, neighbors) in self.nodes.iter_mut().zip(&self.adjacency) {
            for &j in neighbors {
                node.contacts
                    .entry(j)
                    .or_insert_with(|| NeighborContactState::new(j, dt))
                    .record_hello(now)
                    .expect("simulation time is monotonic");
            }
            for state in node.contacts.values_mut() {
                state.tick(now);
            }
        }

        if self.config.protocol == Protocol::Prophet {
            let fresh: Vec<(usize, usize)> = self
                .adjacency
                .iter()
                .zip(&previous)
                .enumerate()
                .flat_map(|(i, (current, before))| {
                    current
                        .iter()
                        .filter(move |j| j.index() > i && before.binary_search(j).is_err())
                        .map(move |j| (i, j.index()))
                })
                .collect();
            for (a, b) in fresh {
                self.encounter(a, b, now);
            }
        }

        if self.step.is_multiple_of(self.config.traffic_period_steps()) {
            self.create_packet(now);
        }

        for i in 0..self.nodes.len() {
            self.forward_node(i, now);
        }
        true
    }

    fn encounter(&mut self, a: usize, b: usize, now: f64) {
        let (ida, idb) = (self.nodes[a].id, self.nodes[b].id);
        for (x, peer) in [(a, idb), (b, ida)] {
            let p = self.nodes[x].prophet.as_mut().expect("prophet state");
            p.age(now);
            p.update(peer);
        }
        let pa = self.nodes[a].prophet.as_ref().unwrap().probabilities().clone();
        let pb = self.nodes[b].prophet.as_ref().unwrap().probabilities().clone();
        self.nodes[a].prophet.as_mut().unwrap().transitivity(idb, &pb);
        self.nodes[b].prophet.as_mut().unwrap().transitivity(ida, &pa);
    }

    fn create_packet(&mut self, now: f64) {
        let id = PacketId(self.next_packet);
        self.next_packet += 1;
        let dest_pos = self.nodes[self.destination.index()].pos;
        let packet = Packet::new(id, self.source, self.destination, dest_pos, now, self.config.ttl_hops);
        self.created.insert(id);
        self.events.push(Event {
            from: Some(self.source),
            to: Some(self.destination),
            ..Event::new(now, id, EventKind::Created)
        });
        let src = &mut self.nodes[self.source.index()];
        src.seen.insert(id);
        src.queue.push(QueuedPacket {
            packet,
            received_step: None,
            idle: false,
            expired: false,
        });
    }

    fn estimated_neighbors(&self, i: usize, now: f64) -> Vec<(NodeId, ContactPrediction)> {
        let connected = &self.adjacency[i];
        self.nodes[i]
            .contacts
            .iter()
            .filter(|(j, _)| connected.binary_search(j).is_err())
            .filter_map(|(j, s)| s.predict_next_contact(now).map(|p| (*j, p)))
            .collect()
    }

    fn forward_node(&mut self, i: usize, now: f64) {
        if self.nodes[i].queue.is_empty() {
            return;
        }
        let queue = std::mem::take(&mut self.nodes[i].queue);
        let self_id = self.nodes[i].id;
        let self_pos = self.nodes[i].pos;
        let connected: Vec<NeighborSnapshot> = self.adjacency[i]
            .iter()
            .map(|j| {
                let n = &self.nodes[j.index()];
                NeighborSnapshot {
                    id: n.id,
                    pos: n.pos,
                    prev_pos: n.prev_pos,
                }
            })
            .collect();
        let estimated = if self.config.protocol == Protocol::Orion {
            self.estimated_neighbors(i, now)
        } else {
            Vec::new()
        };

        let mut kept = Vec::with_capacity(queue.len());
        for mut qp in queue {
            if self.delivered.contains(&qp.packet.id) {
                continue;
            }
            if qp.received_step == Some(self.step) {
                kept.push(qp);
                continue;
            }
            if qp.expired {
                kept.push(qp);
                continue;
            }
            if !qp.packet.can_hop() {
                self.events.push(Event {
                    from: Some(self_id),
                    hops: qp.packet.hop_count,
                    ..Event::new(now, qp.packet.id, EventKind::Dropped)
                });
                qp.expired = true;
                kept.push(qp);
                continue;
            }

            let action = {
                let peers = Peers(&self.nodes);
                let ctx = RoutingContext {
                    self_id,
                    self_pos,
                    now,
                    delta_t: self.config.delta_t,
                    connected: &connected,
                    estimated: &estimated,
                    prophet: self.nodes[i].prophet.as_ref(),
                    peers: &peers,
                };
                route(self.config.protocol, &self.config.routing, &ctx, &qp.packet)
            };

            match action {
                RoutingAction::Handoff { to, criterion } => {
                    self.transmit(self_id, self_pos, to, &qp.packet, Some(criterion), now);
                }
                RoutingAction::Replicate(targets) => {
                    let mut consumed = false;
                    for to in targets {
                        if self.transmit(self_id, self_pos, to, &qp.packet, None, now) {
                            consumed = true;
                            break;
                        }
                    }
                    if !consumed {
                        kept.push(qp);
                    }
                }
                RoutingAction::Schedule { to, predicted_start } => {
                    qp.packet.schedule = Some(Schedule {
                        next_hop: to,
                        predicted_start,
                        scheduled_at: now,
                    });
                    qp.idle = false;
                    self.events.push(Event {
                        from: Some(self_id),
                        to: Some(to),
                        hops: qp.packet.hop_count,
                        ..Event::new(now, qp.packet.id, EventKind::Scheduled)
                    });
                    kept.push(qp);
                }
                RoutingAction::Wait => kept.push(qp),
                RoutingAction::Store => {
                    qp.packet.schedule = None;
                    if !qp.idle {
                        qp.idle = true;
                        self.events.push(Event {
                            from: Some(self_id),
                            hops: qp.packet.hop_count,
                            ..Event::new(now, qp.packet.id, EventKind::Stored)
                        });
                    }
                    kept.push(qp);
                }
            }
        }
        let node = &mut self.nodes[i];
        kept.append(&mut node.queue);
        node.queue = kept;
    }

    /// Sends a copy of `pk` from `from` to `to`. Returns `true` when that
    /// delivered the packet, in which case every other copy is discarded.
    fn transmit(
        &mut self,
        from: NodeId,
        from_pos: Point,
        to: NodeId,
        pk: &Packet,
        criterion: Option<Criterion>,
        now: f64,
    ) -> bool {
        let copy = pk.transmitted_by(from);
        let to_pos = self.nodes[to.index()].pos;
        self.events.push(Event {
            from: Some(from),
            to: Some(to),
            hops: copy.hop_count,
            criterion,
            from_dist: Some(from_pos.distance(pk.dest_pos)),
            to_dist: Some(to_pos.distance(pk.dest_pos)),
            ..Event::new(now, pk.id, EventKind::Sent)
        });
        if to == copy.dest {
            self.events.push(Event {
                from: Some(from),
                to: Some(to),
                hops: copy.hop_count,
                ..Event::new(now, pk.id, EventKind::Delivered)
            });
            self.delivered.insert(pk.id);
            for node in &mut self.nodes {
                node.queue.retain(|q| q.packet.id != pk.id);
            }
            return true;
        }
        let receiver = &mut self.nodes[to.index()];
        receiver.seen.insert(pk.id);
        receiver.queue.push(QueuedPacket {
            packet: copy,
            received_step: Some(self.step),
            idle: false,
            expired: false,
        });
        false
    }
}

/// Runs a scenario to completion and returns its metrics.
pub fn run_scenario(config: &ScenarioConfig) -> Result<MetricsReport, SimError> {
    let mut sim = Simulation::new(config.clone())?;
    sim.run_to_end();
    Ok(sim.metrics())
}

/// Like [`run_scenario`] but also returns the full event log.
pub fn run_scenario_with_events(config: &ScenarioConfig) -> Result<(MetricsReport, Vec<Event>), SimError> {
    let mut sim = Simulation::new(config.clone())?;
    sim.run_to_end();
    let metrics = sim.metrics();
    Ok((metrics, sim.into_events()))
}
