use serde::{Deserialize, Serialize};

use super::channel::ChannelState;
use crate::error::{Error, Result};

/// Default number of grid points used to search a continuous power interval.
pub const DEFAULT_POWER_GRID: usize = 1024;

/// Rate-power curve `C(P, s)`: bits/slot delivered at power `P` in channel state `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RatePowerCurve {
    /// Linear between `(0, 0)` and `(p_on, rate_on)`, independent of the channel state.
    /// With the power set `{0, p_on}` this is an on/off transmitter.
    TwoLevel { p_on: f64, rate_on: f64 },
    /// `C(P) = alpha * ln(1 + beta * P)`, independent of the channel state.
    Logarithmic { alpha: f64, beta: f64 },
    /// Per-state list of `(power, rate)` points, interpolated linearly from the
    /// origin. `tables[s]` belongs to channel state `s`.
    PerStateTable { tables: Vec<Vec<(f64, f64)>> },
}

impl RatePowerCurve {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Err(Error::invalid("rate-power curve", reason));
        match *self {
            RatePowerCurve::TwoLevel { p_on, rate_on } => {
                if !(p_on.is_finite() && p_on > 0.0) {
                    return bad("p_on must be positive");
                }
                if !(rate_on.is_finite() && rate_on >= 0.0) {
                    return bad("rate_on must be nonnegative");
                }
            }
            RatePowerCurve::Logarithmic { alpha, beta } => {
                if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
                    return bad("alpha and beta must be positive");
                }
            }
            RatePowerCurve::PerStateTable { ref tables } => {
                if tables.is_empty() {
                    return bad("at least one state table is required");
                }
                for table in tables {
                    if table.is_empty() {
                        return bad("state tables must be nonempty");
                    }
                    let mut prev = (0.0, 0.0);
                    for (i, &(p, r)) in table.iter().enumerate() {
                        if !(p.is_finite() && r.is_finite() && p >= 0.0 && r >= 0.0) {
                            return bad("table entries must be finite and nonnegative");
                        }
                        if p == 0.0 {
                            if i != 0 || r != 0.0 {
                                return bad("zero power must give zero rate");
                            }
                        } else if p <= prev.0 {
                            return bad("powers must be strictly increasing");
                        }
                        if r < prev.1 {
                            return bad("rates must be nondecreasing in power");
                        }
                        prev = (p, r);
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of channel states the curve distinguishes, if any.
    pub fn state_count(&self) -> Option<usize> {
        match self {
            RatePowerCurve::PerStateTable { tables } => Some(tables.len()),
            _ => None,
        }
    }

    /// Largest power at which the curve is defined in state `s`.
    pub fn domain_max(&self, s: ChannelState) -> f64 {
        match self {
            RatePowerCurve::TwoLevel { p_on, .. } => *p_on,
            RatePowerCurve::Logarithmic { .. } => f64::INFINITY,
            RatePowerCurve::PerStateTable { tables } => tables
                .get(s.0)
                .and_then(|t| t.last())
                .map_or(0.0, |&(p, _)| p),
        }
    }

    /// `C(P, s)` with domain checking.
    pub fn rate(&self, p: f64, s: ChannelState) -> Result<f64> {
        if let Some(n) = self.state_count() {
            if s.0 >= n {
                return Err(Error::domain(format!("unknown channel state {}", s.0)));
            }
        }
        if !(p.is_finite() && p >= 0.0 && p <= self.domain_max(s)) {
            return Err(Error::domain(format!(
                "power {p} outside [0, {}]",
                self.domain_max(s)
            )));
        }
        Ok(self.rate_unchecked(p, s))
    }

    /// `C(P, s)` for arguments already known to be in the domain.
    pub fn rate_unchecked(&self, p: f64, s: ChannelState) -> f64 {
        if p == 0.0 {
            return 0.0;
        }
        match self {
            RatePowerCurve::TwoLevel { p_on, rate_on } => {
                if p == *p_on {
                    *rate_on
                } else {
                    rate_on * p / p_on
                }
            }
            RatePowerCurve::Logarithmic { alpha, beta } => alpha * (beta * p).ln_1p(),
            RatePowerCurve::PerStateTable { tables } => interpolate(&tables[s.0], p),
        }
    }

    /// Largest rate-per-power slope `C(P, s) / P` over all states, so that
    /// `C(P, s) <= beta_max * P` everywhere.
    pub fn beta_max(&self) -> f64 {
        match self {
            RatePowerCurve::TwoLevel { p_on, rate_on } => rate_on / p_on,
            RatePowerCurve::Logarithmic { alpha, beta } => alpha * beta,
            RatePowerCurve::PerStateTable { tables } => tables
                .iter()
                .flatten()
                .filter(|(p, _)| *p > 0.0)
                .map(|(p, r)| r / p)
                .fold(0.0, f64::max),
        }
    }
}

fn interpolate(table: &[(f64, f64)], p: f64) -> f64 {
    let idx = table.partition_point(|&(q, _)| q < p);
    let (p1, r1) = table[idx.min(table.len() - 1)];
    if p1 == p || idx == table.len() {
        return r1;
    }
    let (p0, r0) = if idx == 0 { (0.0, 0.0) } else { table[idx - 1] };
    r0 + (r1 - r0) * (p - p0) / (p1 - p0)
}

/// Set of allowed transmission powers. Always contains `0` and `P_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PowerSet {
    Discrete {
        levels: Vec<f64>,
    },
    /// The continuous interval `[0, p_max]`, searched on `grid` evenly spaced points
    /// where no closed form applies.
    Interval {
        p_max: f64,
        #[serde(default = "default_grid")]
        grid: usize,
    },
}

fn default_grid() -> usize {
    DEFAULT_POWER_GRID
}

impl PowerSet {
    pub fn interval(p_max: f64) -> Self {
        PowerSet::Interval {
            p_max,
            grid: DEFAULT_POWER_GRID,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PowerSet::Discrete { levels } => {
                if levels.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    return Err(Error::invalid("power set", "levels must be finite and nonnegative"));
                }
                if !levels.contains(&0.0) {
                    return Err(Error::invalid("power set", "zero power must be allowed"));
                }
            }
            PowerSet::Interval { p_max, grid } => {
                if !(p_max.is_finite() && *p_max >= 0.0) {
                    return Err(Error::invalid("power set", "p_max must be nonnegative"));
                }
                if *grid < 2 {
                    return Err(Error::invalid("power set", "grid needs at least two points"));
                }
            }
        }
        Ok(())
    }

    pub fn p_max(&self) -> f64 {
        match self {
            PowerSet::Discrete { levels } => levels.iter().copied().fold(0.0, f64::max),
            PowerSet::Interval { p_max, .. } => *p_max,
        }
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self, PowerSet::Interval { .. })
    }

    /// Candidate powers in ascending order, without duplicates.
    pub fn levels(&self) -> Vec<f64> {
        let mut levels = match self {
            PowerSet::Discrete { levels } => levels.clone(),
            PowerSet::Interval { p_max, grid } => {
                let last = grid - 1;
                (0..*grid)
                    .map(|i| {
                        if i == last {
                            *p_max
                        } else {
                            p_max * i as f64 / last as f64
                        }
                    })
                    .collect()
            }
        };
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        levels
    }

    pub fn contains(&self, p: f64) -> bool {
        match self {
            PowerSet::Discrete { levels } => levels.contains(&p),
            PowerSet::Interval { p_max, .. } => (0.0..=*p_max).contains(&p),
        }
    }
}

/// `C(P, s)`, rejecting powers outside `[0, P_max]` of the power set and
/// states the curve does not know.
pub fn eval_rate(curve: &RatePowerCurve, powers: &PowerSet, p: f64, s: ChannelState) -> Result<f64> {
    if !(p >= 0.0 && p <= powers.p_max()) {
        return Err(Error::domain(format!(
            "power {p} outside [0, {}]",
            powers.p_max()
        )));
    }
    curve.rate(p, s)
}
