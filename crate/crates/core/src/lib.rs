//! Energy-optimal joint compression and transmission on a wireless link.
//!
//! Each slot a node receives `A(t)` packets, picks a compression option and a
//! transmit power, and queues what it cannot send. [`policy`] holds the
//! per-slot drift-plus-penalty rules, [`optimize`] the offline minimum average
//! power they approach, and [`sim`] the slotted simulator that runs and audits
//! them. Scenario data lives in [`model`]; [`presets`] ships three reference
//! scenarios.

pub mod error;
pub mod model;
pub mod optimize;
pub mod policy;
pub mod presets;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use model::{
    eval_rate, ArrivalSpec, ChannelSpec, ChannelState, CompressionOutcome, CompressionTable,
    LinkState, Noise, Policy, PowerSet, RatePowerCurve, ScenarioSpec, TableEntry, ThresholdRule,
    DEFAULT_POWER_GRID, SCHEMA_VERSION,
};
pub use optimize::{
    bound_constants, compute_r_max, compute_r_min, distortion_optimum, g_star, h_star,
    optimum_for, p_av_star, BoundConstants, OptimumReport, StationaryPolicy,
};
pub use policy::{
    baseline_khat, choose_compression, choose_compression_distortion, choose_transmission,
    placeholder_threshold_linear_cap, placeholder_threshold_log, Decision,
};
pub use presets::load_preset;
pub use sim::{run, sweep, RunReport, Simulator, SlotRecord};
