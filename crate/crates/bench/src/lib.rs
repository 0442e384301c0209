//! Fixtures shared by the criterion benches.

use linkopt::presets::{scenario1, scenario2, scenario3};
use linkopt::{CompressionTable, Policy, ScenarioSpec, TableEntry};

/// Slots simulated per benchmark iteration.
pub const SLOTS: u64 = 10_000;

/// The built-in scenarios with a short horizon, keyed by name.
pub fn presets() -> Vec<(&'static str, ScenarioSpec)> {
    [("scenario1", scenario1()), ("scenario2", scenario2()), ("scenario3", scenario3())]
        .into_iter()
        .map(|(name, spec)| (name, ScenarioSpec { horizon: SLOTS, ..spec }))
        .collect()
}

/// Scenario III with a lossy second option and an average distortion budget
/// that forces the optimum to mix both options.
pub fn distortion_scenario() -> ScenarioSpec {
    let base = scenario3();
    let bits = base.arrivals.packet_bits();
    let table = CompressionTable::from_fn(base.arrivals.max_packets(), 2, bits, |a, k| {
        let raw = a as f64 * bits;
        match k {
            1 => TableEntry::deterministic(raw / 1.1, 5.0, 0.0),
            _ => TableEntry::deterministic(raw / 1.5, 8.0, 0.1 * a as f64),
        }
    })
    .expect("valid table");
    ScenarioSpec {
        name: Some("scenario3-distortion".into()),
        compression_table: table,
        d_av: Some(0.2),
        policy: Policy::DynamicDistortion,
        horizon: SLOTS,
        ..base
    }
}
