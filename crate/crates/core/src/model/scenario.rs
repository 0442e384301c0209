use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::arrival::ArrivalSpec;
use super::channel::{ChannelSpec, ChannelState};
use super::compression::CompressionTable;
use super::curve::{PowerSet, RatePowerCurve};
use crate::error::{Error, Result};
use crate::policy;

pub const SCHEMA_VERSION: u32 = 1;

/// Which per-slot decision rule drives the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Drift-plus-penalty compression and transmission on the actual backlog.
    Dynamic,
    /// Same rules driven by the place-holder backlog `U + U_thresh`.
    DynamicWithPlaceholder,
    /// Adds the virtual distortion queue to the compression rule.
    DynamicDistortion,
    /// Never compresses; dynamic transmission.
    NoCompression,
    /// Myopic `phi + m / alpha` compression with transmit-at-full-power once the
    /// backlog covers a full slot.
    KhatBaseline,
}

impl Policy {
    pub const ALL: [Policy; 5] = [
        Policy::Dynamic,
        Policy::DynamicWithPlaceholder,
        Policy::DynamicDistortion,
        Policy::NoCompression,
        Policy::KhatBaseline,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Dynamic => "dynamic",
            Policy::DynamicWithPlaceholder => "dynamic_with_placeholder",
            Policy::DynamicDistortion => "dynamic_distortion",
            Policy::NoCompression => "no_compression",
            Policy::KhatBaseline => "khat_baseline",
        }
    }

    /// Policies covered by the drift-plus-penalty performance bounds.
    pub fn is_drift_plus_penalty(self) -> bool {
        matches!(
            self,
            Policy::Dynamic | Policy::DynamicWithPlaceholder | Policy::DynamicDistortion
        )
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::invalid("policy", format!("unknown policy `{s}`")))
    }
}

/// How the place-holder offset `U_thresh` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ThresholdRule {
    /// Largest valid value for logarithmic curves over a continuous power
    /// interval, the generic linear cap otherwise.
    #[default]
    Auto,
    /// `max(0, V / beta_max - mu_max)`.
    LinearCap,
    /// `max(0, V / mu_max - mu_max)`, the linear cap with `beta_max = mu_max`.
    MuMaxCap,
    /// Closed form for `alpha ln(1 + beta P)` over `[0, P_max]`.
    LogMaximal,
    Fixed { bits: f64 },
}

/// Complete description of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub arrivals: ArrivalSpec,
    pub channel: ChannelSpec,
    pub rate_power_curve: RatePowerCurve,
    pub power_set: PowerSet,
    pub compression_table: CompressionTable,
    /// Drift-plus-penalty weight, bits^2 per power unit.
    pub v: f64,
    /// Time-average distortion budget, required by [`Policy::DynamicDistortion`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_av: Option<f64>,
    pub horizon: u64,
    pub seed: u64,
    pub policy: Policy,
    #[serde(default)]
    pub placeholder: ThresholdRule,
    /// `U(0)`, bits.
    #[serde(default)]
    pub initial_backlog: f64,
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ScenarioSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::invalid("scenario", reason));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if !(self.v.is_finite() && self.v > 0.0) {
            return bad("V must be positive".into());
        }
        if self.horizon == 0 {
            return bad("horizon must be at least one slot".into());
        }
        if !(self.initial_backlog.is_finite() && self.initial_backlog >= 0.0) {
            return bad("initial backlog must be nonnegative".into());
        }
        match self.d_av {
            Some(d) if !(d.is_finite() && d >= 0.0) => return bad("d_av must be nonnegative".into()),
            None if self.policy == Policy::DynamicDistortion => {
                return bad("the distortion policy needs d_av".into())
            }
            _ => {}
        }
        if let ThresholdRule::Fixed { bits } = self.placeholder {
            if !(bits.is_finite() && bits >= 0.0) {
                return bad("fixed threshold must be nonnegative".into());
            }
        }
        self.rate_power_curve.validate()?;
        self.power_set.validate()?;
        if self.compression_table.max_packets() != self.arrivals.max_packets() {
            return bad("compression table rows must match the arrival support".into());
        }
        if self.compression_table.packet_bits() != self.arrivals.packet_bits() {
            return bad("compression table and arrivals disagree on packet size".into());
        }
        if let Some(n) = self.rate_power_curve.state_count() {
            if n != self.channel.len() {
                return bad(format!(
                    "curve has {n} state tables but the channel has {} states",
                    self.channel.len()
                ));
            }
        }
        let p_max = self.power_set.p_max();
        for (s, _) in self.channel.support() {
            if p_max > self.rate_power_curve.domain_max(s) {
                return bad(format!(
                    "P_max = {p_max} exceeds the curve's domain in state {}",
                    s.0
                ));
            }
        }
        if self.placeholder == ThresholdRule::LogMaximal && self.log_interval().is_none() {
            return bad("the logarithmic threshold needs a logarithmic curve over an interval".into());
        }
        Ok(())
    }

    /// `(alpha, beta, P_max)` when the link is `alpha ln(1 + beta P)` over a
    /// continuous power interval.
    pub fn log_interval(&self) -> Option<(f64, f64, f64)> {
        match (&self.rate_power_curve, &self.power_set) {
            (RatePowerCurve::Logarithmic { alpha, beta }, PowerSet::Interval { p_max, .. }) => {
                Some((*alpha, *beta, *p_max))
            }
            _ => None,
        }
    }

    /// `mu_max`: largest rate over channel states at `P_max`.
    pub fn mu_max(&self) -> f64 {
        let p_max = self.power_set.p_max();
        self.channel
            .support()
            .map(|(s, _)| self.rate_power_curve.rate_unchecked(p_max, s))
            .fold(0.0, f64::max)
    }

    /// Place-holder offset for this run: zero unless the policy uses place-holder bits.
    pub fn threshold(&self) -> f64 {
        if self.policy != Policy::DynamicWithPlaceholder {
            return 0.0;
        }
        let linear = || policy::placeholder_threshold_linear_cap(
            self.v,
            self.rate_power_curve.beta_max(),
            self.mu_max(),
        );
        match self.placeholder {
            ThresholdRule::Auto => match self.log_interval() {
                Some((alpha, beta, p_max)) => {
                    policy::placeholder_threshold_log(self.v, alpha, beta, p_max)
                }
                None => linear(),
            },
            ThresholdRule::LinearCap => linear(),
            ThresholdRule::MuMaxCap => {
                let mu_max = self.mu_max();
                policy::placeholder_threshold_linear_cap(self.v, mu_max, mu_max)
            }
            ThresholdRule::LogMaximal => {
                let (alpha, beta, p_max) = self.log_interval().expect("validated");
                policy::placeholder_threshold_log(self.v, alpha, beta, p_max)
            }
            ThresholdRule::Fixed { bits } => bits,
        }
    }

    /// Channel states, for iteration.
    pub fn states(&self) -> impl Iterator<Item = ChannelState> + '_ {
        self.channel.support().map(|(s, _)| s)
    }

    /// Applies one `key=value` override and revalidates.
    ///
    /// Keys: `V`/`v`, `seed`, `horizon`, `policy`, `d_av`, `initial_backlog`,
    /// `placeholder` (`auto`, `linear_cap`, `mu_max_cap`, `log_maximal` or a
    /// number of bits) and `b`/`packet_bits`, which rescales the compression
    /// table to keep its ratios.
    pub fn apply_override(&mut self, key: &str, value: &str) -> Result<()> {
        let err = |reason: String| Error::Override {
            key: key.to_owned(),
            reason,
        };
        let number = || -> Result<f64> {
            value
                .trim()
                .parse::<f64>()
                .map_err(|e| err(format!("`{value}` is not a number: {e}")))
        };
        let count = || -> Result<u64> {
            let x = number()?;
            if x < 0.0 || x.fract() != 0.0 || x > u64::MAX as f64 {
                return Err(err(format!("`{value}` is not a nonnegative integer")));
            }
            Ok(x as u64)
        };
        let mut next = self.clone();
        match key {
            "V" | "v" => next.v = number()?,
            "seed" => next.seed = count()?,
            "horizon" => next.horizon = count()?,
            "d_av" => next.d_av = Some(number()?),
            "initial_backlog" => next.initial_backlog = number()?,
            "policy" => next.policy = value.parse().map_err(|e: Error| err(e.to_string()))?,
            "placeholder" => {
                next.placeholder = match value {
                    "auto" => ThresholdRule::Auto,
                    "linear_cap" => ThresholdRule::LinearCap,
                    "mu_max_cap" => ThresholdRule::MuMaxCap,
                    "log_maximal" => ThresholdRule::LogMaximal,
                    _ => ThresholdRule::Fixed { bits: number()? },
                }
            }
            "b" | "packet_bits" => {
                let b = number()?;
                next.arrivals = next
                    .arrivals
                    .with_packet_bits(b)
                    .map_err(|e| err(e.to_string()))?;
                next.compression_table = next
                    .compression_table
                    .rescaled(b)
                    .map_err(|e| err(e.to_string()))?;
            }
            _ => return Err(err("unknown key".into())),
        }
        next.validate().map_err(|e| err(e.to_string()))?;
        *self = next;
        Ok(())
    }
}
