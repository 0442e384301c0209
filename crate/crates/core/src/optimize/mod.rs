//! Offline optimum: the minimum average power any stationary randomized policy
//! can reach, and the constants in the dynamic algorithm's performance bounds.
//!
//! `h*(r)` is the least compression power with mean compressor output at most
//! `r`; `g*(r)` the least transmission power with mean service rate at least
//! `r`. The optimum minimizes `h*(r) + g*(r)` over
//! `r_min <= r <= min(r_max, b E[A])`. With a distortion budget `h*` is replaced
//! by `h_d*`, which also caps the mean distortion.

mod lp;
mod search;

use std::io::Write;

use serde::{Deserialize, Serialize};

pub use lp::{LpSolution, Mix, SeparableLp};
pub use search::{golden_section, linspace};

use crate::error::{Error, Result};
use crate::model::{
    ArrivalSpec, ChannelSpec, CompressionTable, Policy, PowerSet, RatePowerCurve,
    ScenarioSpec,
};

/// Number of intervals in the exported `h*`/`g*` curve samples.
pub const CURVE_SAMPLES: usize = 50;

const FALLBACK_GRID: usize = 1000;

/// A backlog-independent randomized policy.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StationaryPolicy {
    /// `gamma[a][k]`: probability of option `k` when `a` packets arrive.
    pub gamma: Vec<Vec<f64>>,
    /// Per channel state, `(power, probability)` pairs.
    pub power_mix: Vec<Vec<(f64, f64)>>,
}

impl StationaryPolicy {
    /// Checks that every row of `gamma` and every power mixture is a distribution.
    pub fn validate(&self) -> Result<()> {
        let is_dist = |probs: &mut dyn Iterator<Item = f64>| {
            let mut total = 0.0;
            for p in probs {
                if !(p >= 0.0) {
                    return false;
                }
                total += p;
            }
            (total - 1.0).abs() <= 1e-12
        };
        for (a, row) in self.gamma.iter().enumerate() {
            if !is_dist(&mut row.iter().copied()) {
                return Err(Error::invalid("stationary policy", format!("row {a} is not a distribution")));
            }
        }
        for (s, mix) in self.power_mix.iter().enumerate() {
            if !is_dist(&mut mix.iter().map(|x| x.1)) {
                return Err(Error::invalid(
                    "stationary policy",
                    format!("power mixture of state {s} is not a distribution"),
                ));
            }
        }
        Ok(())
    }

    fn compression_mean(&self, arrivals: &ArrivalSpec, f: impl Fn(usize, usize) -> f64) -> f64 {
        arrivals
            .support()
            .map(|(a, p)| {
                p * self.gamma[a]
                    .iter()
                    .enumerate()
                    .map(|(k, g)| g * f(a, k))
                    .sum::<f64>()
            })
            .sum()
    }

    /// `E[m(A, k)]` under `gamma`.
    pub fn mean_output(&self, table: &CompressionTable, arrivals: &ArrivalSpec) -> f64 {
        self.compression_mean(arrivals, |a, k| table.mean_output(a, k))
    }

    /// `E[phi(A, k)]` under `gamma`.
    pub fn compression_power(&self, table: &CompressionTable, arrivals: &ArrivalSpec) -> f64 {
        self.compression_mean(arrivals, |a, k| table.mean_power(a, k))
    }

    /// `E[d(A, k)]` under `gamma`.
    pub fn mean_distortion(&self, table: &CompressionTable, arrivals: &ArrivalSpec) -> f64 {
        self.compression_mean(arrivals, |a, k| table.mean_distortion(a, k))
    }

    /// `E[C(P, S)]` under the power mixtures.
    pub fn service_rate(&self, curve: &RatePowerCurve, channel: &ChannelSpec) -> f64 {
        channel
            .support()
            .map(|(s, pi)| {
                pi * self.power_mix[s.0]
                    .iter()
                    .map(|&(p, q)| q * curve.rate_unchecked(p, s))
                    .sum::<f64>()
            })
            .sum()
    }

    /// `E[P]` under the power mixtures.
    pub fn transmission_power(&self, channel: &ChannelSpec) -> f64 {
        channel
            .support()
            .map(|(s, pi)| pi * self.power_mix[s.0].iter().map(|&(p, q)| p * q).sum::<f64>())
            .sum()
    }
}

/// Constants in the performance bounds of the dynamic algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    /// `b^2 E[A^2]`, bounding `E[R^2]`.
    pub sigma2: f64,
    /// `E[C(P_max, S)^2]`.
    pub rate_second_moment: f64,
    pub b: f64,
    /// `E[max_k phi(A, k)]`.
    pub phi_max: f64,
    /// Largest conditional second moment of the per-slot distortion.
    pub delta2: f64,
    /// Present when a distortion budget is given.
    pub c_const: Option<f64>,
}

impl BoundConstants {
    /// Constant in the power bound: `C` with a distortion budget, `B` otherwise.
    pub fn power_constant(&self) -> f64 {
        self.c_const.unwrap_or(self.b)
    }

    /// Right-hand side of the time-average backlog bound
    /// `(B + V (P_max + phi_max)) / (r_max - r_min)`.
    pub fn backlog_bound(&self, v: f64, p_max: f64, r_max: f64, r_min: f64) -> f64 {
        (self.b + v * (p_max + self.phi_max)) / (r_max - r_min)
    }
}

/// One sample of the `h*` (or `h_d*`) and `g*` curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub r: f64,
    pub h_star: f64,
    pub g_star: f64,
    pub sum: f64,
}

/// Everything the offline optimizer knows about a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumReport {
    pub r_min: f64,
    pub r_max: f64,
    /// `b E[A]`.
    pub raw_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_av: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_d_min: Option<f64>,
    pub r_star: f64,
    pub p_av_star: f64,
    /// Compression part of the optimum, `h*(r*)` or `h_d*(r*)`.
    pub compression_power: f64,
    /// Transmission part of the optimum, `g*(r*)`.
    pub transmission_power: f64,
    pub policy: StationaryPolicy,
    pub bounds: BoundConstants,
    /// Samples over the feasible interval; `h_star` holds `h_d*` with a distortion budget.
    pub curves: Vec<CurveSample>,
}

impl OptimumReport {
    /// Lower end of the feasible rate interval.
    pub fn r_lower(&self) -> f64 {
        self.r_d_min.unwrap_or(self.r_min)
    }

    /// Writes the curve samples as CSV with columns `r,h_star,g_star,sum`.
    pub fn write_curves_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for sample in &self.curves {
            w.serialize(sample)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `r_min = E[min_k m(A, k)]`.
pub fn compute_r_min(table: &CompressionTable, arrivals: &ArrivalSpec) -> f64 {
    arrivals
        .support()
        .map(|(a, p)| {
            p * table
                .row(a)
                .iter()
                .map(|e| e.mean_output)
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

/// `r_max = E[C(P_max, S)]`.
pub fn compute_r_max(curve: &RatePowerCurve, powers: &PowerSet, channel: &ChannelSpec) -> f64 {
    let p_max = powers.p_max();
    channel
        .support()
        .map(|(s, pi)| pi * curve.rate_unchecked(p_max, s))
        .sum()
}

fn rate_tolerance(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1.0)
}

fn gamma_from_mixes(mixes: &[Mix], options: usize) -> Vec<Vec<f64>> {
    mixes
        .iter()
        .map(|mix| {
            let mut row = vec![0.0; options];
            for &(k, q) in mix {
                row[k] += q;
            }
            row
        })
        .collect()
}

/// `h*`: least compression power for each output-rate budget.
#[derive(Debug, Clone)]
pub struct CompressionFrontier {
    lp: SeparableLp,
    options: usize,
    r_min: f64,
    raw_rate: f64,
}

impl CompressionFrontier {
    pub fn new(table: &CompressionTable, arrivals: &ArrivalSpec) -> Self {
        Self::with_cost(table, arrivals, |a, k| table.mean_power(a, k))
    }

    /// Frontier of `E[cost]` against `E[m]`.
    fn with_cost(
        table: &CompressionTable,
        arrivals: &ArrivalSpec,
        cost: impl Fn(usize, usize) -> f64,
    ) -> Self {
        let groups: Vec<(f64, Vec<(f64, f64)>)> = arrivals
            .support()
            .map(|(a, p)| {
                let points = (0..table.option_count())
                    .map(|k| (table.mean_output(a, k), cost(a, k)))
                    .collect();
                (p, points)
            })
            .collect();
        CompressionFrontier {
            lp: SeparableLp::new(&groups),
            options: table.option_count(),
            r_min: compute_r_min(table, arrivals),
            raw_rate: arrivals.raw_rate(),
        }
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    fn check(&self, r: f64) -> Result<()> {
        let tol = rate_tolerance(self.raw_rate);
        if !(r >= self.r_min - tol && r <= self.raw_rate + tol) {
            return Err(Error::domain(format!(
                "rate {r} outside [{}, {}]",
                self.r_min, self.raw_rate
            )));
        }
        Ok(())
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok(self.lp.value(r).unwrap_or_else(|| self.lp.value(self.lp.min_usage()).unwrap()))
    }

    /// Value and achieving `gamma`.
    pub fn solve(&self, r: f64) -> Result<(f64, Vec<Vec<f64>>)> {
        self.check(r)?;
        let sol = self
            .lp
            .solve(r.max(self.lp.min_usage()))
            .expect("budget at least the minimum usage");
        Ok((sol.value, gamma_from_mixes(&sol.mixes, self.options)))
    }

    /// Rates where `h*` has a kink.
    pub fn breakpoints(&self) -> &[f64] {
        self.lp.breakpoints()
    }
}

/// `g*`: least transmission power for each service-rate target.
#[derive(Debug, Clone)]
pub enum TransmissionFrontier {
    /// State-independent `alpha ln(1 + beta P)` over `[0, P_max]`, where
    /// `g*(r) = C^{-1}(r)` exactly.
    Logarithmic {
        alpha: f64,
        beta: f64,
        p_max: f64,
        states: usize,
    },
    /// Per-state hull over the (gridded) power set.
    Sampled {
        lp: SeparableLp,
        levels: Vec<f64>,
        r_max: f64,
    },
}

impl TransmissionFrontier {
    pub fn new(curve: &RatePowerCurve, powers: &PowerSet, channel: &ChannelSpec) -> Self {
        if let (RatePowerCurve::Logarithmic { alpha, beta }, PowerSet::Interval { p_max, .. }) =
            (curve, powers)
        {
            return TransmissionFrontier::Logarithmic {
                alpha: *alpha,
                beta: *beta,
                p_max: *p_max,
                states: channel.len(),
            };
        }
        let levels = powers.levels();
        let groups: Vec<(f64, Vec<(f64, f64)>)> = channel
            .support()
            .map(|(s, pi)| {
                let points = levels
                    .iter()
                    .map(|&p| (-curve.rate_unchecked(p, s), p))
                    .collect();
                (pi, points)
            })
            .collect();
        TransmissionFrontier::Sampled {
            lp: SeparableLp::new(&groups),
            levels,
            r_max: compute_r_max(curve, powers, channel),
        }
    }

    pub fn r_max(&self) -> f64 {
        match self {
            TransmissionFrontier::Logarithmic {
                alpha, beta, p_max, ..
            } => alpha * (beta * p_max).ln_1p(),
            TransmissionFrontier::Sampled { r_max, .. } => *r_max,
        }
    }

    fn check(&self, r: f64) -> Result<f64> {
        let r_max = self.r_max();
        let tol = rate_tolerance(r_max);
        if !(r >= -tol && r <= r_max + tol) {
            return Err(Error::domain(format!("rate {r} outside [0, {r_max}]")));
        }
        Ok(r.clamp(0.0, r_max))
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        let r = self.check(r)?;
        Ok(match self {
            TransmissionFrontier::Logarithmic {
                alpha, beta, p_max, ..
            } => ((r / alpha).exp_m1() / beta).min(*p_max),
            TransmissionFrontier::Sampled { lp, .. } => {
                lp.value(-r).unwrap_or_else(|| lp.value(lp.min_usage()).unwrap())
            }
        })
    }

    /// Value and per-state `(power, probability)` mixtures.
    pub fn solve(&self, r: f64) -> Result<(f64, Vec<Vec<(f64, f64)>>)> {
        let r = self.check(r)?;
        Ok(match self {
            TransmissionFrontier::Logarithmic { states, .. } => {
                let p = self.value(r)?;
                (p, vec![vec![(p, 1.0)]; *states])
            }
            TransmissionFrontier::Sampled { lp, levels, .. } => {
                let sol = lp.solve((-r).max(lp.min_usage())).expect("within range");
                let mix = sol
                    .mixes
                    .iter()
                    .map(|m| m.iter().map(|&(i, q)| (levels[i], q)).collect())
                    .collect();
                (sol.value, mix)
            }
        })
    }

    /// Rates where `g*` has a kink; empty for the smooth logarithmic case.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            TransmissionFrontier::Logarithmic { .. } => Vec::new(),
            TransmissionFrontier::Sampled { lp, .. } => {
                lp.breakpoints().iter().map(|u| -u).collect()
            }
        }
    }
}

/// `h*(r)` with an achieving compression policy.
pub fn h_star(r: f64, table: &CompressionTable, arrivals: &ArrivalSpec) -> Result<(f64, StationaryPolicy)> {
    let (value, gamma) = CompressionFrontier::new(table, arrivals).solve(r)?;
    Ok((
        value,
        StationaryPolicy {
            gamma,
            power_mix: Vec::new(),
        },
    ))
}

/// `g*(r)` with achieving power mixtures.
pub fn g_star(
    r: f64,
    curve: &RatePowerCurve,
    powers: &PowerSet,
    channel: &ChannelSpec,
) -> Result<(f64, StationaryPolicy)> {
    let (value, power_mix) = TransmissionFrontier::new(curve, powers, channel).solve(r)?;
    Ok((
        value,
        StationaryPolicy {
            gamma: Vec::new(),
            power_mix,
        },
    ))
}

/// `B`, `phi_max`, `sigma^2`, `delta^2` and, given `d_av`, `C`.
pub fn bound_constants(
    table: &CompressionTable,
    arrivals: &ArrivalSpec,
    curve: &RatePowerCurve,
    powers: &PowerSet,
    channel: &ChannelSpec,
    d_av: Option<f64>,
) -> BoundConstants {
    let b = arrivals.packet_bits();
    let sigma2 = b * b * arrivals.second_moment();
    let p_max = powers.p_max();
    let rate_second_moment: f64 = channel
        .support()
        .map(|(s, pi)| pi * curve.rate_unchecked(p_max, s).powi(2))
        .sum();
    let phi_max = arrivals
        .support()
        .map(|(a, p)| p * table.row(a).iter().map(|e| e.mean_power).fold(0.0, f64::max))
        .sum();
    let delta2 = table.distortion_second_moment_max();
    BoundConstants {
        sigma2,
        rate_second_moment,
        b: 0.5 * (sigma2 + rate_second_moment),
        phi_max,
        delta2,
        c_const: d_av.map(|d| 0.5 * (d * d + delta2 + sigma2 + rate_second_moment)),
    }
}

/// Minimizes `f` over `[lo, hi]`: golden section, then the best of the result,
/// the endpoints and `extra` candidates, preferring larger `r` on ties. Falls
/// back to a dense grid when `f` does not look convex.
fn minimize_rate(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    extra: impl IntoIterator<Item = f64>,
) -> (f64, f64) {
    if hi <= lo {
        return (lo, f(lo));
    }
    let (x, _) = golden_section(&mut f, lo, hi, 1e-6);
    let mut candidates: Vec<f64> = vec![lo, hi, x];
    candidates.extend(extra.into_iter().filter(|r| (lo..=hi).contains(r)));
    if !search::looks_convex(&mut f, lo, hi, CURVE_SAMPLES) {
        candidates.extend(linspace(lo, hi, FALLBACK_GRID));
    }
    search::best_of(&mut f, candidates, 1e-12).expect("nonempty candidates")
}

fn sample_curves(
    lo: f64,
    hi: f64,
    h: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
) -> Vec<CurveSample> {
    if hi <= lo {
        return Vec::new();
    }
    linspace(lo, hi, CURVE_SAMPLES)
        .map(|r| {
            let (h_star, g_star) = (h(r), g(r));
            CurveSample {
                r,
                h_star,
                g_star,
                sum: h_star + g_star,
            }
        })
        .collect()
}

/// Minimum average power `P*_av` and its achieving stationary policy.
pub fn p_av_star(
    table: &CompressionTable,
    arrivals: &ArrivalSpec,
    curve: &RatePowerCurve,
    powers: &PowerSet,
    channel: &ChannelSpec,
) -> Result<OptimumReport> {
    let h = CompressionFrontier::new(table, arrivals);
    let g = TransmissionFrontier::new(curve, powers, channel);
    let (r_min, r_max, raw_rate) = (h.r_min(), g.r_max(), arrivals.raw_rate());
    if r_min >= r_max {
        return Err(Error::Infeasible(format!(
            "r_min = {r_min} is not below r_max = {r_max}; no policy stabilizes the queue"
        )));
    }
    let (lo, hi) = (r_min, r_max.min(raw_rate));
    let total = |r: f64| h.value(r).unwrap() + g.value(r).unwrap();
    let extra: Vec<f64> = h
        .breakpoints()
        .iter()
        .copied()
        .chain(g.breakpoints())
        .collect();
    let (r_star, _) = minimize_rate(total, lo, hi, extra);
    let (compression_power, gamma) = h.solve(r_star)?;
    let (transmission_power, power_mix) = g.solve(r_star)?;
    Ok(OptimumReport {
        r_min,
        r_max,
        raw_rate,
        d_av: None,
        r_d_min: None,
        r_star,
        p_av_star: compression_power + transmission_power,
        compression_power,
        transmission_power,
        policy: StationaryPolicy { gamma, power_mix },
        bounds: bound_constants(table, arrivals, curve, powers, channel, None),
        curves: sample_curves(lo, hi, |r| h.value(r).unwrap(), |r| g.value(r).unwrap()),
    })
}

/// `h_d*`: least compression power under both an output-rate budget and the
/// distortion budget `d_av`.
#[derive(Debug, Clone)]
pub struct DistortionFrontier<'a> {
    table: &'a CompressionTable,
    arrivals: &'a ArrivalSpec,
    d_av: f64,
    /// Least mean distortion for each output budget.
    least_distortion: CompressionFrontier,
    r_d_min: f64,
}

struct Priced {
    gamma: Vec<Vec<f64>>,
    power: f64,
    distortion: f64,
}

impl<'a> DistortionFrontier<'a> {
    pub fn new(table: &'a CompressionTable, arrivals: &'a ArrivalSpec, d_av: f64) -> Result<Self> {
        let groups: Vec<(f64, Vec<(f64, f64)>)> = arrivals
            .support()
            .map(|(a, p)| {
                let points = (0..table.option_count())
                    .map(|k| (table.mean_distortion(a, k), table.mean_output(a, k)))
                    .collect();
                (p, points)
            })
            .collect();
        let least_output = SeparableLp::new(&groups);
        let r_d_min = least_output.value(d_av).ok_or_else(|| {
            Error::Infeasible(format!(
                "distortion budget {d_av} is below the least achievable mean distortion {}",
                least_output.min_usage()
            ))
        })?;
        Ok(DistortionFrontier {
            table,
            arrivals,
            d_av,
            least_distortion: CompressionFrontier::with_cost(table, arrivals, |a, k| {
                table.mean_distortion(a, k)
            }),
            r_d_min,
        })
    }

    /// Least mean output compatible with the distortion budget.
    pub fn r_d_min(&self) -> f64 {
        self.r_d_min
    }

    fn tolerance(&self) -> f64 {
        1e-9 * self.d_av.max(1.0)
    }

    /// Minimum of `E[phi + mu d]` subject to `E[m] <= r`.
    fn priced(&self, r: f64, mu: f64) -> Priced {
        let (table, arrivals) = (self.table, self.arrivals);
        let frontier = CompressionFrontier::with_cost(table, arrivals, |a, k| {
            table.mean_power(a, k) + mu * table.mean_distortion(a, k)
        });
        let (_, gamma) = frontier.solve(r).expect("rate checked by caller");
        let policy = StationaryPolicy {
            gamma,
            power_mix: Vec::new(),
        };
        Priced {
            power: policy.compression_power(table, arrivals),
            distortion: policy.mean_distortion(table, arrivals),
            gamma: policy.gamma,
        }
    }

    /// `h_d*(r)` and an achieving `gamma`.
    pub fn solve(&self, r: f64) -> Result<(f64, Vec<Vec<f64>>)> {
        let tol = self.tolerance();
        let least = self.least_distortion.value(r.max(self.least_distortion.r_min()))?;
        if least > self.d_av + tol {
            return Err(Error::domain(format!(
                "rate {r} cannot meet distortion budget {} (least distortion {least})",
                self.d_av
            )));
        }
        let free = self.priced(r, 0.0);
        if free.distortion <= self.d_av + tol {
            return Ok((free.power, free.gamma));
        }
        let mut lo = (0.0, free);
        let mut mu_hi = 1.0;
        let mut hi = self.priced(r, mu_hi);
        let mut doublings = 0;
        while hi.distortion > self.d_av + tol {
            if doublings == 200 {
                // Only the least-distortion policies fit; take the cheapest of them.
                let (_, gamma) = self.least_distortion.solve(r)?;
                let policy = StationaryPolicy {
                    gamma,
                    power_mix: Vec::new(),
                };
                return Ok((policy.compression_power(self.table, self.arrivals), policy.gamma));
            }
            lo = (mu_hi, hi);
            mu_hi *= 2.0;
            hi = self.priced(r, mu_hi);
            doublings += 1;
        }
        let mut hi = (mu_hi, hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo.0 + hi.0);
            if mid <= lo.0 || mid >= hi.0 {
                break;
            }
            let p = self.priced(r, mid);
            if p.distortion > self.d_av + tol {
                lo = (mid, p);
            } else {
                hi = (mid, p);
            }
        }
        let (lo, hi) = (lo.1, hi.1);
        let theta = ((self.d_av - hi.distortion) / (lo.distortion - hi.distortion)).clamp(0.0, 1.0);
        let gamma = lo
            .gamma
            .iter()
            .zip(&hi.gamma)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| theta * p + (1.0 - theta) * q).collect())
            .collect();
        Ok((theta * lo.power + (1.0 - theta) * hi.power, gamma))
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        self.solve(r).map(|x| x.0)
    }
}

/// Distortion-constrained minimum average power.
pub fn distortion_optimum(
    table: &CompressionTable,
    arrivals: &ArrivalSpec,
    curve: &RatePowerCurve,
    powers: &PowerSet,
    channel: &ChannelSpec,
    d_av: f64,
) -> Result<OptimumReport> {
    let h = DistortionFrontier::new(table, arrivals, d_av)?;
    let g = TransmissionFrontier::new(curve, powers, channel);
    let (r_d_min, r_max, raw_rate) = (h.r_d_min(), g.r_max(), arrivals.raw_rate());
    if r_d_min >= r_max {
        return Err(Error::Infeasible(format!(
            "r_d,min = {r_d_min} is not below r_max = {r_max}"
        )));
    }
    let (lo, hi) = (r_d_min, r_max.min(raw_rate));
    let h_val = |r: f64| h.value(r.max(lo)).unwrap();
    let total = |r: f64| h_val(r) + g.value(r).unwrap();
    let (r_star, _) = minimize_rate(total, lo, hi, g.breakpoints());
    let (compression_power, gamma) = h.solve(r_star.max(lo))?;
    let (transmission_power, power_mix) = g.solve(r_star)?;
    Ok(OptimumReport {
        r_min: compute_r_min(table, arrivals),
        r_max,
        raw_rate,
        d_av: Some(d_av),
        r_d_min: Some(r_d_min),
        r_star,
        p_av_star: compression_power + transmission_power,
        compression_power,
        transmission_power,
        policy: StationaryPolicy { gamma, power_mix },
        bounds: bound_constants(table, arrivals, curve, powers, channel, Some(d_av)),
        curves: sample_curves(lo, hi, h_val, |r| g.value(r).unwrap()),
    })
}

/// The optimum matching the scenario's policy: distortion-constrained for the
/// distortion policy, plain otherwise.
pub fn optimum_for(spec: &ScenarioSpec) -> Result<OptimumReport> {
    match (spec.policy, spec.d_av) {
        (Policy::DynamicDistortion, Some(d_av)) => distortion_optimum(
            &spec.compression_table,
            &spec.arrivals,
            &spec.rate_power_curve,
            &spec.power_set,
            &spec.channel,
            d_av,
        ),
        _ => p_av_star(
            &spec.compression_table,
            &spec.arrivals,
            &spec.rate_power_curve,
            &spec.power_set,
            &spec.channel,
        ),
    }
}
