//! Scenario data types shared by the policies, the optimizer and the simulator.

mod arrival;
mod channel;
mod compression;
mod curve;
mod scenario;
mod state;

pub use arrival::ArrivalSpec;
pub use channel::{ChannelSpec, ChannelState};
pub use compression::{CompressionOutcome, CompressionTable, Noise, TableEntry};
pub use curve::{eval_rate, PowerSet, RatePowerCurve, DEFAULT_POWER_GRID};
pub use scenario::{Policy, ScenarioSpec, ThresholdRule, SCHEMA_VERSION};
pub use state::LinkState;
