//! Per-neighbour contact tracking.
//!
//! Time is divided into periods of `delta_t`. A contact is a maximal run of
//! periods in which at least one HELLO from the neighbour arrived; a
//! non-contact is a maximal run without any. Each completed phase appends its
//! duration to the matching series and to an [`ArmaOnlineState`], which then
//! forecasts the next contact start and its length.

use thiserror::Error;

use crate::arma::{ArmaOnlineState, Series};
use crate::types::NodeId;

/// Contacts a neighbour must have completed before it is predicted at all.
pub const MIN_CONTACTS_FOR_PREDICTION: u32 = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContactError {
    #[error("HELLO at t={now} precedes the previous one at t={last}")]
    TimeRegression { now: f64, last: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Unknown,
    Connected,
    Disconnected,
}

/// Which series a recorded duration belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DurationKind {
    Contact,
    NonContact,
}

impl DurationKind {
    pub fn label(self) -> &'static str {
        match self {
            DurationKind::Contact => "C",
            DurationKind::NonContact => "Cbar",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPrediction {
    pub next_contact_start: f64,
    pub expected_duration: f64,
    /// Completed contacts behind the prediction.
    pub confidence_n: u32,
}

/// Contact state one node keeps about one neighbour.
#[derive(Debug, Clone)]
pub struct NeighborContactState {
    neighbor_id: NodeId,
    delta_t: f64,
    phase: Phase,
    phase_start: f64,
    last_hello: f64,
    first_hello: Option<f64>,
    c_model: ArmaOnlineState,
    cbar_model: ArmaOnlineState,
    contacts: Series,
    gaps: Series,
    contact_count: u32,
}

fn quantize(duration: f64, delta_t: f64) -> f64 {
    (duration / delta_t).round() * delta_t
}

impl NeighborContactState {
    pub fn new(neighbor_id: NodeId, delta_t: f64) -> Self {
        assert!(delta_t > 0.0, "delta_t must be positive");
        Self {
            neighbor_id,
            delta_t,
            phase: Phase::Unknown,
            phase_start: 0.0,
            last_hello: f64::NEG_INFINITY,
            first_hello: None,
            c_model: ArmaOnlineState::new(delta_t),
            cbar_model: ArmaOnlineState::new(delta_t),
            contacts: Series::new(),
            gaps: Series::new(),
            contact_count: 0,
        }
    }

    pub fn neighbor_id(&self) -> NodeId {
        self.neighbor_id
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn phase_start(&self) -> f64 {
        self.phase_start
    }

    pub fn last_hello(&self) -> Option<f64> {
        self.first_hello.map(|_| self.last_hello)
    }

    pub fn first_hello(&self) -> Option<f64> {
        self.first_hello
    }

    pub fn contact_count(&self) -> u32 {
        self.contact_count
    }

    pub fn contact_model(&self) -> &ArmaOnlineState {
        &self.c_model
    }

    pub fn non_contact_model(&self) -> &ArmaOnlineState {
        &self.cbar_model
    }

    /// Completed contact durations, oldest first.
    pub fn contact_series(&self) -> &Series {
        &self.contacts
    }

    /// Completed non-contact durations, oldest first.
    pub fn non_contact_series(&self) -> &Series {
        &self.gaps
    }

    /// All recorded durations in the order they completed. Gap `i` always
    /// follows contact `i`.
    pub fn recorded(&self) -> impl Iterator<Item = (DurationKind, usize, f64)> + '_ {
        let (c, g) = (self.contacts.values(), self.gaps.values());
        (0..c.len()).flat_map(move |i| {
            let gap = g.get(i).map(|&d| (DurationKind::NonContact, i, d));
            std::iter::once((DurationKind::Contact, i, c[i])).chain(gap)
        })
    }

    pub fn record_hello(&mut self, now: f64) -> Result<(), ContactError> {
        if self.first_hello.is_some() && now < self.last_hello {
            return Err(ContactError::TimeRegression {
                now,
                last: self.last_hello,
            });
        }
        // a missed tick must not merge two contacts
        self.tick(now);
        match self.phase {
            Phase::Unknown => {
                self.first_hello = Some(now);
                self.phase = Phase::Connected;
                self.phase_start = now;
            }
            Phase::Disconnected => {
                let gap = quantize(now - self.phase_start, self.delta_t);
                if gap > 0.0 {
                    self.push_gap(gap);
                }
                self.phase = Phase::Connected;
                self.phase_start = now;
            }
            Phase::Connected => {}
        }
        self.last_hello = now;
        Ok(())
    }

    /// Closes the current contact once a full period has passed without a
    /// HELLO; the contact is credited up to `last_hello + delta_t`.
    pub fn tick(&mut self, now: f64) {
        if self.phase != Phase::Connected || now - self.last_hello <= self.delta_t {
            return;
        }
        let end = self.last_hello + self.delta_t;
        let duration = quantize(end - self.phase_start, self.delta_t).max(self.delta_t);
        self.push_contact(duration);
        self.phase = Phase::Disconnected;
        self.phase_start = end;
    }

    fn push_contact(&mut self, duration: f64) {
        self.contacts
            .push(duration)
            .expect("contact duration is positive");
        self.c_model.update(duration);
        self.contact_count += 1;
    }

    fn push_gap(&mut self, duration: f64) {
        self.gaps
            .push(duration)
            .expect("non-contact duration is positive");
        self.cbar_model.update(duration);
    }

    /// Predicts when the neighbour is next in contact and for how long.
    pub fn predict_next_contact(&self, now: f64) -> Option<ContactPrediction> {
        if self.contact_count < MIN_CONTACTS_FOR_PREDICTION {
            return None;
        }
        let contact_len = self.c_model.forecast_next();
        let (start, duration) = match self.phase {
            Phase::Unknown => return None,
            Phase::Connected => (now, (contact_len - (now - self.phase_start)).max(0.0)),
            Phase::Disconnected => (
                (self.phase_start + self.cbar_model.forecast_next()).max(now),
                contact_len,
            ),
        };
        Some(ContactPrediction {
            next_contact_start: start,
            expected_duration: duration,
            confidence_n: self.contact_count,
        })
    }
}
