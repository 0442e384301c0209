//! Strategies and checks for the structural properties.

use linkopt::optimize::{linspace, CompressionFrontier, TransmissionFrontier, CURVE_SAMPLES};
use linkopt::policy::{compression_objectives, TransmissionRule};
use linkopt::{
    choose_compression, choose_transmission, eval_rate, ArrivalSpec, ChannelSpec, ChannelState,
    CompressionTable, Noise, Policy, PowerSet, RatePowerCurve, ScenarioSpec, Simulator, TableEntry,
    ThresholdRule, SCHEMA_VERSION,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CASES: u32 = 1000;

fn distribution(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, len).prop_map(|w| {
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    })
}

fn noise() -> impl Strategy<Value = Noise> {
    prop_oneof![
        Just(Noise::Deterministic),
        (0.01f64..0.5).prop_map(|half_width| Noise::UniformAroundMean { half_width }),
    ]
}

/// `(ratio, phi, d, output noise, power noise)` for one `(a, k)` cell.
type Cell = (f64, f64, f64, Noise, Noise);

fn cell() -> impl Strategy<Value = Cell> {
    (0.05f64..1.0, 0.0f64..5.0, 0.0f64..2.0, noise(), noise())
}

pub fn compression() -> impl Strategy<Value = (ArrivalSpec, CompressionTable)> {
    (1usize..=5, 1usize..=3, 1.0f64..64.0)
        .prop_flat_map(|(n, k, b)| {
            (
                distribution(n + 1..=n + 1),
                prop::collection::vec(prop::collection::vec(cell(), k), n),
                Just(b),
            )
        })
        .prop_map(|(probs, cells, b)| {
            let arrivals = ArrivalSpec::new(probs, b).unwrap();
            let table = CompressionTable::from_fn(arrivals.max_packets(), cells[0].len(), b, |a, k| {
                let (ratio, phi, d, out, pow) = cells[a - 1][k - 1];
                let spread = match out {
                    Noise::UniformAroundMean { half_width } => half_width,
                    Noise::Deterministic => 0.0,
                };
                TableEntry {
                    mean_output: a as f64 * b * ratio / (1.0 + spread),
                    mean_power: phi,
                    mean_distortion: d,
                    output_noise: out,
                    power_noise: pow,
                    distortion_noise: Noise::Deterministic,
                }
            })
            .unwrap();
            (arrivals, table)
        })
}

/// A rate-power curve, its power set and a matching channel.
pub fn link() -> impl Strategy<Value = (RatePowerCurve, PowerSet, ChannelSpec)> {
    let channel = (1usize..=3).prop_flat_map(|s| distribution(s..=s)).prop_map(|probs| {
        let names = (0..probs.len()).map(|i| format!("S{i}")).collect();
        ChannelSpec::new(names, probs).unwrap()
    });
    let p_max = 0.1f64..10.0;
    (channel, p_max, 0u8..4, 1.0f64..5000.0, 0.05f64..5.0, prop::collection::vec(0.05f64..1.0, 6))
        .prop_map(|(channel, p_max, kind, scale, beta, shape)| match kind {
            0 => (
                RatePowerCurve::TwoLevel {
                    p_on: p_max,
                    rate_on: scale,
                },
                PowerSet::Discrete {
                    levels: vec![0.0, p_max],
                },
                channel,
            ),
            1 => (
                RatePowerCurve::Logarithmic { alpha: scale, beta },
                PowerSet::interval(p_max),
                channel,
            ),
            2 => (
                RatePowerCurve::Logarithmic { alpha: scale, beta },
                PowerSet::Discrete {
                    levels: vec![0.0, p_max * shape[0], p_max],
                },
                channel,
            ),
            _ => {
                let levels = [0.25, 0.5, 1.0].map(|f| f * p_max);
                let tables = (0..channel.len())
                    .map(|s| {
                        let gain = scale * shape[s];
                        let bend = 0.3 + 0.7 * shape[s + 3];
                        levels.iter().map(|&p| (p, gain * (p / p_max).powf(bend))).collect()
                    })
                    .collect();
                let mut all = vec![0.0];
                all.extend(levels);
                (
                    RatePowerCurve::PerStateTable { tables },
                    PowerSet::Discrete { levels: all },
                    channel,
                )
            }
        })
}

fn tol(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1.0)
}

/// `h*` nonincreasing and convex on a 50-point grid over `[r_min, raw]`.
pub fn h_star_shape((arrivals, table): (ArrivalSpec, CompressionTable)) -> Result<(), TestCaseError> {
    let frontier = CompressionFrontier::new(&table, &arrivals);
    let ys: Vec<f64> = linspace(frontier.r_min(), arrivals.raw_rate(), CURVE_SAMPLES - 1)
        .map(|r| frontier.value(r).unwrap())
        .collect();
    prop_assert_eq!(ys.len(), CURVE_SAMPLES);
    let scale = ys[0];
    for w in ys.windows(2) {
        prop_assert!(w[1] <= w[0] + tol(scale), "h* increases: {:?}", w);
    }
    for w in ys.windows(3) {
        prop_assert!(w[1] <= 0.5 * (w[0] + w[2]) + tol(scale), "h* not convex: {:?}", w);
    }
    Ok(())
}

/// `g*` nondecreasing and convex on a 50-point grid over `[0, r_max]`.
pub fn g_star_shape((curve, powers, channel): (RatePowerCurve, PowerSet, ChannelSpec)) -> Result<(), TestCaseError> {
    let frontier = TransmissionFrontier::new(&curve, &powers, &channel);
    let ys: Vec<f64> = linspace(0.0, frontier.r_max(), CURVE_SAMPLES - 1)
        .map(|r| frontier.value(r).unwrap())
        .collect();
    let scale = powers.p_max();
    prop_assert!(ys[0].abs() <= tol(scale));
    for w in ys.windows(2) {
        prop_assert!(w[1] >= w[0] - tol(scale), "g* decreases: {:?}", w);
    }
    for w in ys.windows(3) {
        prop_assert!(w[1] <= 0.5 * (w[0] + w[2]) + tol(scale), "g* not convex: {:?}", w);
    }
    Ok(())
}

fn spec_for(
    (arrivals, table): (ArrivalSpec, CompressionTable),
    (curve, powers, channel): (RatePowerCurve, PowerSet, ChannelSpec),
    policy: Policy,
    v: f64,
    seed: u64,
) -> ScenarioSpec {
    ScenarioSpec {
        schema_version: SCHEMA_VERSION,
        name: None,
        arrivals,
        channel,
        rate_power_curve: curve,
        power_set: powers,
        compression_table: table,
        v,
        d_av: (policy == Policy::DynamicDistortion).then_some(0.5),
        horizon: 200,
        seed,
        policy,
        placeholder: ThresholdRule::LinearCap,
        initial_backlog: 0.0,
    }
}

pub type SimInput = (
    (ArrivalSpec, CompressionTable),
    (RatePowerCurve, PowerSet, ChannelSpec),
    Policy,
    f64,
    u64,
    f64,
);

pub fn simulation() -> impl Strategy<Value = SimInput> {
    (
        compression(),
        link(),
        prop::sample::select(Policy::ALL.to_vec()),
        1.0f64..1e6,
        any::<u64>(),
        0.0f64..1e4,
    )
}

/// `U`, `X >= 0` every slot, the queue equation holds and `R <= a b`.
pub fn queues_stay_nonnegative((comp, link, policy, v, seed, u0): SimInput) -> Result<(), TestCaseError> {
    let mut spec = spec_for(comp, link, policy, v, seed);
    spec.initial_backlog = u0;
    let b = spec.arrivals.packet_bits();
    let exact = spec.threshold() == 0.0;
    let mut sim = Simulator::new(&spec).unwrap();
    for _ in 0..spec.horizon {
        let r = sim.step();
        prop_assert!(r.u_before >= 0.0 && r.u_after >= 0.0 && r.x >= 0.0);
        prop_assert!(r.r >= 0.0 && r.r <= r.a as f64 * b, "R = {} for a = {}", r.r, r.a);
        prop_assert!(r.p_comp >= 0.0 && r.p_tran >= 0.0);
        let expected = (r.u_before - r.mu).max(0.0) + r.r;
        if exact {
            prop_assert_eq!(r.u_after, expected);
        } else {
            prop_assert!((r.u_after - expected).abs() <= 1e-9 * expected.max(1.0));
        }
    }
    Ok(())
}

pub type DecisionInput = (
    (ArrivalSpec, CompressionTable),
    (RatePowerCurve, PowerSet, ChannelSpec),
    f64,
    f64,
);

pub fn decision() -> impl Strategy<Value = DecisionInput> {
    (compression(), link(), 0.0f64..1e5, 1e-3f64..1e6)
}

/// With nothing queued, no transmission power is spent and the cheapest
/// compression option is used; an empty system with no arrivals stays empty.
pub fn zero_backlog_is_quiescent(((arrivals, table), (curve, powers, channel), _, v): DecisionInput) -> Result<(), TestCaseError> {
    for (s, _) in channel.support() {
        prop_assert_eq!(choose_transmission(0.0, s, &curve, &powers, v), 0.0);
    }
    for a in 0..=arrivals.max_packets() {
        let k = choose_compression(0.0, a, &table, v);
        let cheapest = (0..table.option_count())
            .map(|k| table.mean_power(a, k))
            .fold(f64::INFINITY, f64::min);
        prop_assert_eq!(table.mean_power(a, k), cheapest);
    }
    let spec = spec_for((arrivals, table), (curve, powers, channel), Policy::Dynamic, v, 0);
    let mut sim = Simulator::new(&spec).unwrap();
    for _ in 0..5 {
        let r = sim.step_with(0, ChannelState(0));
        prop_assert_eq!((r.u_after, r.p_tran, r.p_comp, r.r), (0.0, 0.0, 0.0, 0.0));
    }
    Ok(())
}

/// Scaling `U` and `V` by a power of two leaves both decisions unchanged, and
/// any positive factor leaves the chosen option optimal.
pub fn scaling_preserves_decisions(
    ((arrivals, table), (curve, powers, channel), u, v): DecisionInput,
    exponent: i32,
    factor: f64,
) -> Result<(), TestCaseError> {
    let c = 2f64.powi(exponent);
    let rule = TransmissionRule::new(&curve, &powers, channel.len());
    for a in 0..=arrivals.max_packets() {
        let k = choose_compression(u, a, &table, v);
        prop_assert_eq!(choose_compression(c * u, a, &table, c * v), k);
        let scaled = choose_compression(factor * u, a, &table, factor * v);
        let objectives = compression_objectives(u, 0.0, a, &table, v);
        let best = objectives.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!(objectives[scaled] <= best + 1e-12 * best.abs().max(1.0));
    }
    for (s, _) in channel.support() {
        let (p, _) = rule.choose(u, s, v);
        prop_assert_eq!(rule.choose(c * u, s, c * v).0, p);
    }
    Ok(())
}

/// The chosen option and power are optimal among all candidates.
pub fn decisions_are_optimal(((arrivals, table), (curve, powers, channel), u, v): DecisionInput) -> Result<(), TestCaseError> {
    for a in 0..=arrivals.max_packets() {
        let k = choose_compression(u, a, &table, v);
        for j in 0..table.option_count() {
            let cost = |k: usize| u * table.mean_output(a, k) + v * table.mean_power(a, k);
            let (ck, cj) = (cost(k), cost(j));
            prop_assert!(ck <= cj + 1e-12 * cj.abs().max(1.0));
            if j < k {
                prop_assert!(cj > ck, "tie not broken toward the smaller index");
            }
        }
    }
    for (s, _) in channel.support() {
        let p = choose_transmission(u, s, &curve, &powers, v);
        prop_assert!(powers.contains(p));
        let value = |p: f64| u * curve.rate_unchecked(p, s) - v * p;
        let best = value(p);
        let candidates = match powers {
            PowerSet::Discrete { .. } => powers.levels(),
            PowerSet::Interval { p_max, .. } => linspace(0.0, p_max, 4096).collect(),
        };
        for q in candidates {
            let other = value(q);
            prop_assert!(best >= other - 1e-9 * other.abs().max(best.abs()).max(1.0));
        }
    }
    Ok(())
}

/// `C(P, s)` is nondecreasing in `P` and zero at zero power.
pub fn rate_is_monotone((curve, powers, channel): (RatePowerCurve, PowerSet, ChannelSpec)) -> Result<(), TestCaseError> {
    for (s, _) in channel.support() {
        prop_assert_eq!(eval_rate(&curve, &powers, 0.0, s).unwrap(), 0.0);
        let rates: Vec<f64> = linspace(0.0, powers.p_max(), 200)
            .map(|p| eval_rate(&curve, &powers, p, s).unwrap())
            .collect();
        for w in rates.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        prop_assert!(eval_rate(&curve, &powers, powers.p_max() * 1.5 + 1.0, s).is_err());
    }
    Ok(())
}

/// Largest backlog `U - mu(U)` drop over a grid of backlogs at or above `th`.
pub fn never_below_threshold(
    th: f64,
    v: f64,
    curve: &RatePowerCurve,
    powers: &PowerSet,
    channel: &ChannelSpec,
) -> Result<(), TestCaseError> {
    let rule = TransmissionRule::new(curve, powers, channel.len());
    let top = th + 4.0 * v / curve.beta_max().max(1e-9) + 10.0;
    for u in linspace(th, top, 2000) {
        for (s, _) in channel.support() {
            let (_, mu) = rule.choose(u, s, v);
            prop_assert!(
                (u - mu).max(0.0) >= th - 1e-9 * th.max(1.0),
                "U = {u}, mu = {mu}, threshold {th}"
            );
        }
    }
    Ok(())
}
