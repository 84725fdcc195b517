//! Deterministic discrete-time simulation of proposers, builders and
//! challengers on top of the chain contracts.

mod config;
mod metrics;
mod world;

pub use config::{PartAssignment, SimConfig, Strategy};
pub use metrics::{BuilderMetrics, Metrics};
pub use world::{honest_hidden_state, BuilderState, ChallengeReport, SimPoe, World, CHALLENGER};
