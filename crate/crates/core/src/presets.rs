//! Built-in scenarios and their default sweeps.
//!
//! All three share eight Bernoulli(1/2) sensors and a single compression
//! option. Scenario I has a static on/off link at 2048 bits per unit power;
//! Scenario II raises the packet size past what the link carries without
//! compression; Scenario III swaps in `1060 ln(1 + P / 16)` on `[0, 750]` and a
//! measured compression table.

use crate::error::{Error, Result};
use crate::model::{
    ArrivalSpec, ChannelSpec, CompressionTable, Noise, Policy, PowerSet, RatePowerCurve,
    ScenarioSpec, TableEntry, ThresholdRule, SCHEMA_VERSION,
};

pub const PRESETS: [&str; 3] = ["scenario1", "scenario2", "scenario3"];

/// Packet size used by [`scenario2`] unless overridden; raw rate 3072 bits/slot.
pub const SCENARIO2_DEFAULT_BITS: f64 = 768.0;

const SENSORS: usize = 8;

fn sensors(b: f64) -> ArrivalSpec {
    ArrivalSpec::binomial(SENSORS, 0.5, b).expect("valid binomial")
}

fn on_off_link() -> (ChannelSpec, RatePowerCurve, PowerSet) {
    (
        ChannelSpec::constant("ON"),
        RatePowerCurve::TwoLevel {
            p_on: 1.0,
            rate_on: 2048.0,
        },
        PowerSet::Discrete {
            levels: vec![0.0, 1.0],
        },
    )
}

/// Halves the data on average: output uniform on `[2ab/5, 3ab/5]`, power
/// uniform on `[0.45, 0.55]`.
fn halving_table(b: f64) -> CompressionTable {
    CompressionTable::from_fn(SENSORS, 1, b, |a, _| TableEntry {
        mean_output: a as f64 * b / 2.0,
        mean_power: 0.5,
        mean_distortion: 0.0,
        output_noise: Noise::UniformAroundMean { half_width: 0.2 },
        power_noise: Noise::UniformAroundMean { half_width: 0.1 },
        distortion_noise: Noise::Deterministic,
    })
    .expect("valid table")
}

pub fn scenario1() -> ScenarioSpec {
    let (channel, curve, powers) = on_off_link();
    ScenarioSpec {
        schema_version: SCHEMA_VERSION,
        name: Some("scenario1".into()),
        arrivals: sensors(256.0),
        channel,
        rate_power_curve: curve,
        power_set: powers,
        compression_table: halving_table(256.0),
        v: 1e7,
        d_av: None,
        horizon: 1_000_000,
        seed: 1,
        policy: Policy::Dynamic,
        placeholder: ThresholdRule::MuMaxCap,
        initial_backlog: 0.0,
    }
}

pub fn scenario2() -> ScenarioSpec {
    let (channel, curve, powers) = on_off_link();
    let b = SCENARIO2_DEFAULT_BITS;
    ScenarioSpec {
        schema_version: SCHEMA_VERSION,
        name: Some("scenario2".into()),
        arrivals: sensors(b),
        channel,
        rate_power_curve: curve,
        power_set: powers,
        compression_table: halving_table(b),
        v: 1e7,
        d_av: None,
        horizon: 5_000_000,
        seed: 2,
        policy: Policy::DynamicWithPlaceholder,
        placeholder: ThresholdRule::MuMaxCap,
        initial_backlog: 0.0,
    }
}

pub fn scenario3() -> ScenarioSpec {
    let b = 256.0;
    let table = CompressionTable::from_fn(SENSORS, 1, b, |a, _| {
        let raw = a as f64 * b;
        if a <= 3 {
            TableEntry::deterministic(raw / 1.1, 5.0, 0.0)
        } else {
            TableEntry::deterministic(raw / 1.5, 8.0, 0.0)
        }
    })
    .expect("valid table");
    ScenarioSpec {
        schema_version: SCHEMA_VERSION,
        name: Some("scenario3".into()),
        arrivals: sensors(b),
        channel: ChannelSpec::constant("ON"),
        rate_power_curve: RatePowerCurve::Logarithmic {
            alpha: 1060.0,
            beta: 1.0 / 16.0,
        },
        power_set: PowerSet::interval(750.0),
        compression_table: table,
        v: 7e4,
        d_av: None,
        horizon: 1_000_000,
        seed: 3,
        policy: Policy::Dynamic,
        placeholder: ThresholdRule::Auto,
        initial_backlog: 0.0,
    }
}

pub fn load_preset(id: &str) -> Result<ScenarioSpec> {
    match id {
        "scenario1" => Ok(scenario1()),
        "scenario2" => Ok(scenario2()),
        "scenario3" => Ok(scenario3()),
        _ => Err(Error::UnknownPreset(id.to_owned())),
    }
}

/// Default `V` values for the power/backlog-versus-`V` sweeps.
pub fn default_v_grid(id: &str) -> Result<Vec<f64>> {
    match id {
        "scenario1" => Ok(vec![1e3, 3e3, 1e4, 3e4, 1e5, 3e5, 1e6, 3e6, 1e7]),
        "scenario3" => Ok(vec![1e4, 2e4, 3e4, 5e4, 7e4, 1e5, 1.5e5, 2e5]),
        "scenario2" => Ok(vec![1e7]),
        _ => Err(Error::UnknownPreset(id.to_owned())),
    }
}

/// Packet sizes for the Scenario II rate sweep.
pub fn scenario2_packet_sizes() -> Vec<f64> {
    (0..=12).map(|i| 256.0 + 64.0 * i as f64).collect()
}

fn with(spec: &ScenarioSpec, policy: Policy, v: f64) -> ScenarioSpec {
    ScenarioSpec {
        policy,
        v,
        ..spec.clone()
    }
}

/// The built-in sweep for a preset: the V grid, or packet sizes for scenario2.
///
/// Scenarios I and III sweep `V` with and without place-holder bits (and, for
/// III, without compression). Scenario II sweeps the packet size with
/// compression, and without it only while the raw rate stays below 2048.
pub fn sweep_preset(id: &str) -> Result<Vec<ScenarioSpec>> {
    let base = load_preset(id)?;
    let mut specs = Vec::new();
    match id {
        "scenario2" => {
            for b in scenario2_packet_sizes() {
                let mut spec = base.clone();
                spec.apply_override("b", &b.to_string())?;
                specs.push(spec.clone());
                if spec.arrivals.raw_rate() < 2048.0 {
                    specs.push(ScenarioSpec {
                        policy: Policy::NoCompression,
                        ..spec
                    });
                }
            }
        }
        _ => {
            let mut policies = vec![Policy::Dynamic, Policy::DynamicWithPlaceholder];
            if id == "scenario3" {
                policies.push(Policy::NoCompression);
            }
            for v in default_v_grid(id)? {
                for &policy in &policies {
                    specs.push(with(&base, policy, v));
                }
            }
        }
    }
    Ok(specs)
}
