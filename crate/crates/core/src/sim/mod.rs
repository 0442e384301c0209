//! Slotted-time simulation of the link.
//!
//! Each slot observes `(A, S)`, picks a compression option, samples the
//! compressor, picks a transmission power, and then updates
//! `U <- max(U - mu, 0) + R` and, in distortion mode, `X <- max(X - d_av, 0) + D`.
//! Decisions read the backlog at the start of the slot.

mod report;
mod stats;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use report::{Audit, RunReport, SweepRow, Theory};
pub use stats::{CompensatedSum, SeriesStats, BATCHES};

use crate::error::{Error, Result};
use crate::model::{ChannelState, LinkState, Policy, ScenarioSpec};
use crate::policy::{self, TransmissionRule};
use crate::rng::RngStreams;

/// Everything that happened in one slot. Backlogs are actual (not place-holder)
/// values; `x` is the distortion queue after the update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub t: u64,
    pub a: usize,
    pub s: usize,
    pub k: usize,
    pub p_tran: f64,
    pub r: f64,
    pub p_comp: f64,
    pub d: f64,
    pub mu: f64,
    pub u_before: f64,
    pub u_after: f64,
    pub x: f64,
}

/// A running simulation of one scenario.
#[derive(Debug, Clone)]
pub struct Simulator {
    spec: ScenarioSpec,
    rule: TransmissionRule,
    /// `alpha` of the myopic baseline.
    khat_alpha: f64,
    /// Per-state rate at `P_max`.
    peak_rates: Vec<f64>,
    d_av: f64,
    state: LinkState,
    rng: RngStreams,
    t: u64,
}

impl Simulator {
    pub fn new(spec: &ScenarioSpec) -> Result<Self> {
        spec.validate()?;
        let states = spec.channel.len();
        let p_max = spec.power_set.p_max();
        Ok(Simulator {
            rule: TransmissionRule::new(&spec.rate_power_curve, &spec.power_set, states),
            khat_alpha: spec.rate_power_curve.beta_max(),
            peak_rates: spec
                .states()
                .map(|s| spec.rate_power_curve.rate_unchecked(p_max, s))
                .collect(),
            d_av: spec.d_av.unwrap_or(0.0),
            state: LinkState::new(spec.initial_backlog, spec.threshold())?,
            rng: RngStreams::new(spec.seed),
            t: 0,
            spec: spec.clone(),
        })
    }

    pub fn spec(&self) -> &ScenarioSpec {
        &self.spec
    }

    pub fn state(&self) -> LinkState {
        self.state
    }

    /// Slots simulated so far.
    pub fn slot(&self) -> u64 {
        self.t
    }

    /// Samples the environment and advances one slot.
    pub fn step(&mut self) -> SlotRecord {
        let a = self.spec.arrivals.sample(&mut self.rng.arrivals);
        let s = self.spec.channel.sample(&mut self.rng.channel);
        self.step_with(a, s)
    }

    /// Advances one slot with the given arrivals and channel state.
    pub fn step_with(&mut self, a: usize, s: ChannelState) -> SlotRecord {
        let spec = &self.spec;
        let table = &spec.compression_table;
        let before = self.state;
        let u_eff = before.effective_backlog();
        let k = match spec.policy {
            Policy::Dynamic | Policy::DynamicWithPlaceholder => {
                policy::choose_compression(u_eff, a, table, spec.v)
            }
            Policy::DynamicDistortion => policy::choose_compression_distortion(
                u_eff,
                before.distortion_queue(),
                a,
                table,
                spec.v,
            ),
            Policy::NoCompression => 0,
            Policy::KhatBaseline => policy::baseline_khat(a, table, self.khat_alpha),
        };
        let out = table.sample_unchecked(a, k, &mut self.rng.compression);
        let (p_tran, mu) = match spec.policy {
            Policy::KhatBaseline => {
                let peak = self.peak_rates[s.0];
                if u_eff >= peak && peak > 0.0 {
                    (spec.power_set.p_max(), peak)
                } else {
                    (0.0, 0.0)
                }
            }
            _ => self.rule.choose(u_eff, s, spec.v),
        };
        let mut after = before.serve_and_admit(mu, out.output);
        if spec.policy == Policy::DynamicDistortion {
            after = after.charge_distortion(self.d_av, out.distortion);
        }
        self.state = after;
        let record = SlotRecord {
            t: self.t,
            a,
            s: s.0,
            k,
            p_tran,
            r: out.output,
            p_comp: out.power,
            d: out.distortion,
            mu,
            u_before: before.backlog(),
            u_after: after.backlog(),
            x: after.distortion_queue(),
        };
        self.t += 1;
        record
    }
}

/// Runs the scenario over its horizon and audits the result.
pub fn run(spec: &ScenarioSpec) -> Result<RunReport> {
    run_observed(spec, |_| Ok(()))
}

/// Like [`run`], handing every slot to `observe`.
pub fn run_observed(
    spec: &ScenarioSpec,
    mut observe: impl FnMut(&SlotRecord) -> Result<()>,
) -> Result<RunReport> {
    if spec.horizon == 0 {
        return Err(Error::domain("horizon must be at least one slot"));
    }
    let mut sim = Simulator::new(spec)?;
    let mut acc = report::Accumulators::new(spec, sim.state());
    for _ in 0..spec.horizon {
        let before = sim.state();
        let rec = sim.step();
        acc.push(&rec, before, sim.state());
        observe(&rec)?;
    }
    let theory = report::theory(spec);
    Ok(acc.finish(spec, sim.state(), theory))
}

/// Runs the scenario and writes every slot as CSV.
pub fn run_with_trace<W: Write>(spec: &ScenarioSpec, out: W) -> Result<RunReport> {
    let mut w = csv::Writer::from_writer(out);
    let report = run_observed(spec, |rec| Ok(w.serialize(rec)?))?;
    w.flush()?;
    Ok(report)
}

/// Independent runs in parallel on the current rayon pool, reports in input order.
pub fn sweep(specs: &[ScenarioSpec]) -> Result<Vec<RunReport>> {
    if specs.is_empty() {
        return Err(Error::invalid("sweep", "at least one scenario is required"));
    }
    specs
        .par_iter()
        .enumerate()
        .map(|(index, spec)| {
            run(spec).map_err(|e| Error::Run {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Writes one CSV row per report.
pub fn write_sweep_csv<W: Write>(reports: &[RunReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(SweepRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}
