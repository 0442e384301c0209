//! Per-slot decision rules.
//!
//! The dynamic rules greedily minimize a drift-plus-penalty bound each slot:
//!
//! ```text
//! k(t)      = argmin_k  U m(A, k) + X d(A, k) + V phi(A, k)
//! P_tran(t) = argmax_P  U C(P, S) - V P
//! ```
//!
//! where `U` is the (possibly place-holder) backlog and `X` the virtual
//! distortion queue (zero without a distortion constraint). Ties go to the
//! smallest option index and the smallest power.

use serde::Serialize;

use crate::model::{ChannelState, CompressionTable, PowerSet, RatePowerCurve};

/// Objective `U m(a, k) + X d(a, k) + V phi(a, k)` for every option `k`.
pub fn compression_objectives(
    u_eff: f64,
    x: f64,
    a: usize,
    table: &CompressionTable,
    v: f64,
) -> Vec<f64> {
    table
        .row(a)
        .iter()
        .map(|e| u_eff * e.mean_output + x * e.mean_distortion + v * e.mean_power)
        .collect()
}

fn argmin_first(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, val) in values.enumerate() {
        if val < best.1 {
            best = (i, val);
        }
    }
    best.0
}

/// Drift-plus-penalty compression choice.
pub fn choose_compression(u_eff: f64, a: usize, table: &CompressionTable, v: f64) -> usize {
    argmin_first(
        table
            .row(a)
            .iter()
            .map(|e| u_eff * e.mean_output + v * e.mean_power),
    )
}

/// Compression choice with the virtual distortion queue `x` pricing distortion.
pub fn choose_compression_distortion(
    u_eff: f64,
    x: f64,
    a: usize,
    table: &CompressionTable,
    v: f64,
) -> usize {
    argmin_first(
        table
            .row(a)
            .iter()
            .map(|e| u_eff * e.mean_output + x * e.mean_distortion + v * e.mean_power),
    )
}

/// Myopic baseline `argmin_k phi(a, k) + m(a, k) / alpha`, exact when the
/// channel is static, the curve is linear with slope `alpha` and no
/// compression is needed for stability.
pub fn baseline_khat(a: usize, table: &CompressionTable, alpha: f64) -> usize {
    argmin_first(
        table
            .row(a)
            .iter()
            .map(|e| e.mean_power + e.mean_output / alpha),
    )
}

/// Precomputed transmission rule for one `(curve, power set)` pair.
#[derive(Debug, Clone)]
pub enum TransmissionRule {
    /// `P*(U) = clamp(U alpha / V - 1 / beta, 0, P_max)` for a logarithmic curve
    /// over a continuous interval.
    Logarithmic { alpha: f64, beta: f64, p_max: f64 },
    /// Exhaustive search over `(P, C(P, s))` candidates per state, ascending in `P`.
    Enumerated { candidates: Vec<Vec<(f64, f64)>> },
}

impl TransmissionRule {
    pub fn new(curve: &RatePowerCurve, powers: &PowerSet, states: usize) -> Self {
        if let (RatePowerCurve::Logarithmic { alpha, beta }, PowerSet::Interval { p_max, .. }) =
            (curve, powers)
        {
            return TransmissionRule::Logarithmic {
                alpha: *alpha,
                beta: *beta,
                p_max: *p_max,
            };
        }
        let levels = powers.levels();
        let candidates = (0..states)
            .map(|s| {
                levels
                    .iter()
                    .map(|&p| (p, curve.rate_unchecked(p, ChannelState(s))))
                    .collect()
            })
            .collect();
        TransmissionRule::Enumerated { candidates }
    }

    /// `(P_tran, C(P_tran, s))` maximizing `U C(P, s) - V P`.
    pub fn choose(&self, u_eff: f64, s: ChannelState, v: f64) -> (f64, f64) {
        match self {
            TransmissionRule::Logarithmic { alpha, beta, p_max } => {
                let p = (u_eff * alpha / v - 1.0 / beta).clamp(0.0, *p_max);
                (p, alpha * (beta * p).ln_1p())
            }
            TransmissionRule::Enumerated { candidates } => {
                let mut best = (0.0, 0.0);
                let mut best_val = f64::NEG_INFINITY;
                for &(p, rate) in &candidates[s.0] {
                    let val = u_eff * rate - v * p;
                    if val > best_val {
                        best_val = val;
                        best = (p, rate);
                    }
                }
                best
            }
        }
    }
}

/// Drift-plus-penalty transmission power for effective backlog `u_eff` in state `s`.
pub fn choose_transmission(
    u_eff: f64,
    s: ChannelState,
    curve: &RatePowerCurve,
    powers: &PowerSet,
    v: f64,
) -> f64 {
    let states = curve.state_count().unwrap_or(s.0 + 1);
    TransmissionRule::new(curve, powers, states).choose(u_eff, s, v).0
}

/// Place-holder offset `max(0, V / beta_max - mu_max)` valid for any curve with
/// `C(P, s) <= beta_max P`.
pub fn placeholder_threshold_linear_cap(v: f64, beta_max: f64, mu_max: f64) -> f64 {
    (v / beta_max - mu_max).max(0.0)
}

/// Largest place-holder offset preserved by the closed-form transmission rule
/// on `alpha ln(1 + beta P)`, `0 <= P <= P_max`.
///
/// Minimizes `U - mu*(U)` over the band of backlogs where the power is
/// strictly between `0` and `P_max`; the minimizer is an endpoint or `U = alpha`.
pub fn placeholder_threshold_log(v: f64, alpha: f64, beta: f64, p_max: f64) -> f64 {
    let lo = v / (alpha * beta);
    let hi = lo + v * p_max / alpha;
    let theta = if lo <= alpha && alpha <= hi {
        alpha - alpha * (alpha * alpha * beta / v).ln()
    } else {
        let mu_max = alpha * (beta * p_max).ln_1p();
        lo.min(hi - mu_max)
    };
    theta.max(0.0)
}

/// One slot's decision plus the objective values behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decision {
    pub k: usize,
    pub p_tran: f64,
    /// `C(P_tran, s)`.
    pub rate: f64,
    pub compression_objectives: Vec<f64>,
    pub transmission_objective: f64,
}

/// Both drift-plus-penalty decisions for one slot, with the audit trail.
#[allow(clippy::too_many_arguments)]
pub fn decide(
    u_eff: f64,
    x: f64,
    a: usize,
    s: ChannelState,
    table: &CompressionTable,
    curve: &RatePowerCurve,
    powers: &PowerSet,
    v: f64,
) -> Decision {
    let compression_objectives = compression_objectives(u_eff, x, a, table, v);
    let k = argmin_first(compression_objectives.iter().copied());
    let p_tran = choose_transmission(u_eff, s, curve, powers, v);
    let rate = curve.rate_unchecked(p_tran, s);
    Decision {
        k,
        p_tran,
        rate,
        compression_objectives,
        transmission_objective: u_eff * rate - v * p_tran,
    }
}
