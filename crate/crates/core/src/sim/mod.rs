//! Deterministic fixed-step simulator.

mod config;
mod engine;
mod metrics;
mod mobility;
mod rng;

pub use config::ScenarioConfig;
pub use engine::{
    compute_connectivity, run_scenario, run_scenario_with_events, step_mobility, Adjacency,
    NodeState, Simulation,
};
pub use metrics::{collect_metrics, write_events_csv, Event, EventKind, MetricsReport};
pub use mobility::{Arena, Mobility, NodeKind};
pub use rng::{derive_seed, stream_rng, SimRng, Stream};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    InvalidConfig(String),
}
