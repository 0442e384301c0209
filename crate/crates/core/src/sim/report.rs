use serde::{Deserialize, Serialize};

use super::stats::SeriesStats;
use super::SlotRecord;
use crate::model::{LinkState, Policy, ScenarioSpec};
use crate::optimize::{self, BoundConstants};

/// Theoretical reference values for a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theory {
    pub constants: BoundConstants,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_av_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_star: Option<f64>,
    /// `P*_av + B / V`, or `P*_av + C / V` with a distortion budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_bound: Option<f64>,
    /// `(B + V (P_max + phi_max)) / (r_max - r_min)`; absent with a distortion budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backlog_bound: Option<f64>,
    /// `r_max - r_min`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_gap: Option<f64>,
    /// Why the optimum is missing, if it is.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimum_error: Option<String>,
}

/// Pass/fail checks of a finished run. `None` means the check does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub queues_nonnegative: bool,
    pub output_within_raw: bool,
    /// `P_comp <= phi_max + SEM`.
    pub compression_power_within_phi_max: bool,
    /// `P_tot <= power_bound + 3 SEM + L(0) / (V T)`.
    pub power_within_bound: Option<bool>,
    /// Effective backlog within 1% of its bound plus the initial-condition term.
    pub backlog_within_bound: Option<bool>,
    /// `D <= d_av + 3 SEM`.
    pub distortion_within_budget: Option<bool>,
    /// Place-holder runs: transmissions never dig into the place-holder bits.
    pub placeholder_respected: Option<bool>,
}

impl Audit {
    pub fn passed(&self) -> bool {
        self.queues_nonnegative
            && self.output_within_raw
            && self.compression_power_within_phi_max
            && [
                self.power_within_bound,
                self.backlog_within_bound,
                self.distortion_within_budget,
                self.placeholder_respected,
            ]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

/// Averages over the second half of the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfAverages {
    pub power: f64,
    pub backlog: f64,
    pub effective_backlog: f64,
    pub distortion: f64,
}

/// Summary of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub policy: Policy,
    pub v: f64,
    pub seed: u64,
    pub packet_bits: f64,
    pub raw_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_av: Option<f64>,
    pub slots: u64,
    /// Place-holder offset in effect.
    pub threshold: f64,
    pub avg_power: f64,
    pub avg_compression_power: f64,
    pub avg_transmission_power: f64,
    pub avg_backlog: f64,
    pub avg_effective_backlog: f64,
    pub avg_distortion: f64,
    /// Batch-means standard errors.
    pub sem_power: f64,
    pub sem_compression_power: f64,
    pub sem_effective_backlog: f64,
    pub sem_distortion: f64,
    pub second_half: HalfAverages,
    pub final_backlog: f64,
    pub final_distortion_queue: f64,
    pub min_backlog: f64,
    pub min_effective_backlog: f64,
    /// Slots where the offered rate exceeded the actual backlog in a place-holder run.
    pub placeholder_violations: u64,
    pub theory: Theory,
    pub audit: Audit,
}

/// One line of `sweep.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub name: String,
    pub policy: Policy,
    pub v: f64,
    pub seed: u64,
    pub packet_bits: f64,
    pub raw_rate: f64,
    pub slots: u64,
    pub threshold: f64,
    pub p_tot: f64,
    pub p_comp: f64,
    pub p_tran: f64,
    pub u_avg: f64,
    pub u_eff_avg: f64,
    pub d_avg: f64,
    pub sem_power: f64,
    pub p_av_star: Option<f64>,
    pub power_bound: Option<f64>,
    pub backlog_bound: Option<f64>,
    pub audit_passed: bool,
}

impl From<&RunReport> for SweepRow {
    fn from(r: &RunReport) -> Self {
        SweepRow {
            name: r.name.clone().unwrap_or_default(),
            policy: r.policy,
            v: r.v,
            seed: r.seed,
            packet_bits: r.packet_bits,
            raw_rate: r.raw_rate,
            slots: r.slots,
            threshold: r.threshold,
            p_tot: r.avg_power,
            p_comp: r.avg_compression_power,
            p_tran: r.avg_transmission_power,
            u_avg: r.avg_backlog,
            u_eff_avg: r.avg_effective_backlog,
            d_avg: r.avg_distortion,
            sem_power: r.sem_power,
            p_av_star: r.theory.p_av_star,
            power_bound: r.theory.power_bound,
            backlog_bound: r.theory.backlog_bound,
            audit_passed: r.audit.passed(),
        }
    }
}

pub(super) fn theory(spec: &ScenarioSpec) -> Theory {
    let distortion = spec.policy == Policy::DynamicDistortion;
    let constants = optimize::bound_constants(
        &spec.compression_table,
        &spec.arrivals,
        &spec.rate_power_curve,
        &spec.power_set,
        &spec.channel,
        if distortion { spec.d_av } else { None },
    );
    match optimize::optimum_for(spec) {
        Ok(opt) => Theory {
            constants,
            p_av_star: Some(opt.p_av_star),
            r_star: Some(opt.r_star),
            power_bound: Some(opt.p_av_star + constants.power_constant() / spec.v),
            backlog_bound: (!distortion).then(|| {
                constants.backlog_bound(spec.v, spec.power_set.p_max(), opt.r_max, opt.r_min)
            }),
            rate_gap: (!distortion).then_some(opt.r_max - opt.r_min),
            optimum_error: None,
        },
        Err(e) => Theory {
            constants,
            p_av_star: None,
            r_star: None,
            power_bound: None,
            backlog_bound: None,
            rate_gap: None,
            optimum_error: Some(e.to_string()),
        },
    }
}

pub(super) struct Accumulators {
    power: SeriesStats,
    comp: SeriesStats,
    tran: SeriesStats,
    backlog: SeriesStats,
    effective: SeriesStats,
    distortion: SeriesStats,
    half: [SeriesStats; 4],
    half_start: u64,
    min_backlog: f64,
    min_effective: f64,
    min_x: f64,
    violations: u64,
    output_within_raw: bool,
    packet_bits: f64,
    initial_lyapunov: f64,
}

impl Accumulators {
    pub(super) fn new(spec: &ScenarioSpec, initial: LinkState) -> Self {
        let h = spec.horizon;
        let u0 = initial.effective_backlog();
        Accumulators {
            power: SeriesStats::new(h),
            comp: SeriesStats::new(h),
            tran: SeriesStats::new(h),
            backlog: SeriesStats::new(h),
            effective: SeriesStats::new(h),
            distortion: SeriesStats::new(h),
            half: std::array::from_fn(|_| SeriesStats::new(h - h / 2)),
            half_start: h / 2,
            min_backlog: f64::INFINITY,
            min_effective: f64::INFINITY,
            min_x: f64::INFINITY,
            violations: 0,
            output_within_raw: true,
            packet_bits: spec.arrivals.packet_bits(),
            initial_lyapunov: 0.5 * u0 * u0,
        }
    }

    pub(super) fn push(&mut self, rec: &SlotRecord, before: LinkState, after: LinkState) {
        let p = rec.p_comp + rec.p_tran;
        self.power.push(p);
        self.comp.push(rec.p_comp);
        self.tran.push(rec.p_tran);
        self.backlog.push(before.backlog());
        self.effective.push(before.effective_backlog());
        self.distortion.push(rec.d);
        if rec.t >= self.half_start {
            self.half[0].push(p);
            self.half[1].push(before.backlog());
            self.half[2].push(before.effective_backlog());
            self.half[3].push(rec.d);
        }
        for st in [before, after] {
            self.min_backlog = self.min_backlog.min(st.backlog());
            self.min_effective = self.min_effective.min(st.effective_backlog());
            self.min_x = self.min_x.min(st.distortion_queue());
        }
        let th = before.threshold();
        if th > 0.0 && before.effective_backlog() - rec.mu < th * (1.0 - 1e-12) {
            self.violations += 1;
        }
        if rec.r > rec.a as f64 * self.packet_bits {
            self.output_within_raw = false;
        }
    }

    pub(super) fn finish(self, spec: &ScenarioSpec, last: LinkState, theory: Theory) -> RunReport {
        let t = self.power.count();
        let dpp = spec.policy.is_drift_plus_penalty();
        let distortion = spec.policy == Policy::DynamicDistortion;
        let sem_power = self.power.sem();
        let sem_comp = self.comp.sem();
        let transient = self.initial_lyapunov / (spec.v * t as f64);
        let power_within_bound = theory
            .power_bound
            .filter(|_| dpp)
            .map(|bound| self.power.mean() <= bound + 3.0 * sem_power + transient);
        let backlog_within_bound = match (theory.backlog_bound, theory.rate_gap) {
            (Some(bound), Some(gap)) if dpp => {
                let slack = self.initial_lyapunov / (gap * t as f64);
                Some(self.effective.mean() <= bound * 1.01 + slack)
            }
            _ => None,
        };
        let distortion_within_budget = distortion.then(|| {
            self.distortion.mean() <= spec.d_av.unwrap_or(0.0) + 3.0 * self.distortion.sem()
        });
        let th = last.threshold();
        let audit = Audit {
            queues_nonnegative: self.min_backlog >= 0.0 && self.min_x >= 0.0,
            output_within_raw: self.output_within_raw,
            compression_power_within_phi_max: self.comp.mean()
                <= theory.constants.phi_max + sem_comp + 1e-12,
            power_within_bound,
            backlog_within_bound,
            distortion_within_budget,
            placeholder_respected: (th > 0.0).then_some(self.violations == 0),
        };
        RunReport {
            name: spec.name.clone(),
            policy: spec.policy,
            v: spec.v,
            seed: spec.seed,
            packet_bits: spec.arrivals.packet_bits(),
            raw_rate: spec.arrivals.raw_rate(),
            d_av: spec.d_av.filter(|_| distortion),
            slots: t,
            threshold: th,
            avg_power: self.power.mean(),
            avg_compression_power: self.comp.mean(),
            avg_transmission_power: self.tran.mean(),
            avg_backlog: self.backlog.mean(),
            avg_effective_backlog: self.effective.mean(),
            avg_distortion: self.distortion.mean(),
            sem_power,
            sem_compression_power: sem_comp,
            sem_effective_backlog: self.effective.sem(),
            sem_distortion: self.distortion.sem(),
            second_half: HalfAverages {
                power: self.half[0].mean(),
                backlog: self.half[1].mean(),
                effective_backlog: self.half[2].mean(),
                distortion: self.half[3].mean(),
            },
            final_backlog: last.backlog(),
            final_distortion_queue: last.distortion_queue(),
            min_backlog: self.min_backlog,
            min_effective_backlog: self.min_effective,
            placeholder_violations: self.violations,
            theory,
            audit,
        }
    }
}
