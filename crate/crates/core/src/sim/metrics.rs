use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use crate::protocols::Criterion;
use crate::types::{NodeId, PacketId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Created,
    Sent,
    Scheduled,
    Stored,
    Delivered,
    /// Hop limit reached; the copy stays with its holder but is never
    /// forwarded again.
    Dropped,
}

impl EventKind {
    pub fn label(self) -> &'static str {
        match self {
            EventKind::Created => "created",
            EventKind::Sent => "sent",
            EventKind::Scheduled => "scheduled",
            EventKind::Stored => "stored",
            EventKind::Delivered => "delivered",
            EventKind::Dropped => "dropped",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One entry of the per-packet event log.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub time: f64,
    pub packet_id: PacketId,
    pub kind: EventKind,
    pub from: Option<NodeId>,
    pub to: Option<NodeId>,
    /// Hop count of the copy concerned (after the hop, for `sent`/`delivered`).
    pub hops: u32,
    /// ORION rule behind a `sent` event.
    pub criterion: Option<Criterion>,
    /// Sender and receiver distances to the packet's destination position.
    pub from_dist: Option<f64>,
    pub to_dist: Option<f64>,
}

impl Event {
    pub fn new(time: f64, packet_id: PacketId, kind: EventKind) -> Self {
        Self {
            time,
            packet_id,
            kind,
            from: None,
            to: None,
            hops: 0,
            criterion: None,
            from_dist: None,
            to_dist: None,
        }
    }
}

/// The four aggregate metrics of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub sent: u64,
    pub delivered: u64,
    pub psr: f64,
    pub avg_hop_count: Option<f64>,
    pub first_packet_arrival: Option<f64>,
    pub avg_e2e_delay: Option<f64>,
}

/// Derives the metrics from a complete event log. Packets without a
/// `delivered` event count as sent but not delivered; only the first delivery
/// of each packet is counted.
pub fn collect_metrics(events: &[Event]) -> MetricsReport {
    let mut created: BTreeMap<PacketId, f64> = BTreeMap::new();
    let mut delivered: BTreeMap<PacketId, (f64, u32)> = BTreeMap::new();
    for e in events {
        match e.kind {
            EventKind::Created => {
                created.entry(e.packet_id).or_insert(e.time);
            }
            EventKind::Delivered => {
                delivered.entry(e.packet_id).or_insert((e.time, e.hops));
            }
            _ => {}
        }
    }

    let sent = created.len() as u64;
    let n = delivered.len() as u64;
    let psr = if sent == 0 { 0.0 } else { n as f64 / sent as f64 };
    let avg = |xs: Vec<f64>| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);

    MetricsReport {
        sent,
        delivered: n,
        psr,
        avg_hop_count: avg(delivered.values().map(|(_, h)| f64::from(*h)).collect()),
        first_packet_arrival: delivered.values().map(|(t, _)| *t).reduce(f64::min),
        avg_e2e_delay: avg(delivered
            .iter()
            .map(|(id, (t, _))| t - created.get(id).copied().unwrap_or(*t))
            .collect()),
    }
}

fn opt_id(id: Option<NodeId>) -> String {
    id.map_or_else(|| "NA".to_string(), |n| n.to_string())
}

/// Writes `time_s,packet_id,event,from,to` rows.
pub fn write_events_csv<W: Write>(events: &[Event], mut out: W) -> io::Result<()> {
    writeln!(out, "time_s,packet_id,event,from,to")?;
    for e in events {
        writeln!(
            out,
            "{},{},{},{},{}",
            e.time,
            e.packet_id,
            e.kind,
            opt_id(e.from),
            opt_id(e.to)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn created(id: u64, t: f64) -> Event {
        Event::new(t, PacketId(id), EventKind::Created)
    }

    fn delivered(id: u64, t: f64, hops: u32) -> Event {
        Event {
            hops,
            ..Event::new(t, PacketId(id), EventKind::Delivered)
        }
    }

    #[test]
    fn psr_and_hops() {
        let mut log: Vec<Event> = (0..10).map(|i| created(i, 0.0)).collect();
        for (i, h) in [1, 2, 2, 3, 1, 2, 3].into_iter().enumerate() {
            log.push(delivered(i as u64, 10.0, h));
        }
        let m = collect_metrics(&log);
        assert_eq!(m.sent, 10);
        assert_eq!(m.delivered, 7);
        assert!((m.psr - 0.7).abs() < 1e-12);
        assert!((m.avg_hop_count.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nothing_delivered() {
        let m = collect_metrics(&[created(0, 0.0), created(1, 5.0)]);
        assert_eq!(m.psr, 0.0);
        assert!(m.avg_hop_count.is_none());
        assert!(m.first_packet_arrival.is_none());
        assert!(m.avg_e2e_delay.is_none());
    }

    #[test]
    fn first_arrival_and_delay() {
        let log = [
            created(0, 30.0),
            created(1, 35.0),
            created(2, 50.0),
            delivered(1, 55.0, 1),
            delivered(0, 40.0, 1),
            delivered(2, 90.0, 1),
            delivered(2, 95.0, 4),
        ];
        let m = collect_metrics(&log);
        assert_eq!(m.first_packet_arrival, Some(40.0));
        assert!((m.avg_e2e_delay.unwrap() - (10.0 + 20.0 + 40.0) / 3.0).abs() < 1e-12);
        assert_eq!(m.delivered, 3);
    }

    #[test]
    fn events_csv_layout() {
        let mut e = created(3, 5.0);
        e.from = Some(NodeId(1));
        e.to = Some(NodeId(2));
        let mut buf = Vec::new();
        write_events_csv(&[e, Event::new(6.5, PacketId(3), EventKind::Dropped)], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "time_s,packet_id,event,from,to\n5,3,created,1,2\n6.5,3,dropped,NA,NA\n"
        );
    }
}
