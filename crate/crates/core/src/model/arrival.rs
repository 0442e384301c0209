use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PROB_TOL: f64 = 1e-12;

/// Distribution of the number of packets `A(t)` arriving in a slot, each of
/// `packet_bits` bits, with support `{0, ..., max_packets}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArrivalRepr", into = "ArrivalRepr")]
pub struct ArrivalSpec {
    probabilities: Vec<f64>,
    packet_bits: f64,
    cdf: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ArrivalRepr {
    max_packets: usize,
    packet_bits: f64,
    probabilities: Vec<f64>,
}

impl TryFrom<ArrivalRepr> for ArrivalSpec {
    type Error = Error;

    fn try_from(repr: ArrivalRepr) -> Result<Self> {
        if repr.probabilities.len() != repr.max_packets + 1 {
            return Err(Error::invalid(
                "arrival spec",
                format!(
                    "{} probabilities given for max_packets = {}",
                    repr.probabilities.len(),
                    repr.max_packets
                ),
            ));
        }
        ArrivalSpec::new(repr.probabilities, repr.packet_bits)
    }
}

impl From<ArrivalSpec> for ArrivalRepr {
    fn from(spec: ArrivalSpec) -> Self {
        ArrivalRepr {
            max_packets: spec.max_packets(),
            packet_bits: spec.packet_bits,
            probabilities: spec.probabilities,
        }
    }
}

pub(crate) fn check_distribution(what: &'static str, probs: &[f64]) -> Result<()> {
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::invalid(what, "probabilities must be finite and nonnegative"));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::invalid(
            what,
            format!("probabilities sum to {total}, not 1"),
        ));
    }
    Ok(())
}

pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect();
    // Guard the inverse-CDF lookup against rounding in the last partial sum.
    if let Some(last) = cdf.last_mut() {
        *last = f64::INFINITY;
    }
    cdf
}

/// Inverse-CDF draw consuming exactly one uniform from `rng`.
pub(crate) fn draw_index<R: Rng + ?Sized>(cdf: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

impl ArrivalSpec {
    pub fn new(probabilities: Vec<f64>, packet_bits: f64) -> Result<Self> {
        if probabilities.len() < 2 {
            return Err(Error::invalid("arrival spec", "need max_packets >= 1"));
        }
        check_distribution("arrival spec", &probabilities)?;
        if !(packet_bits.is_finite() && packet_bits > 0.0) {
            return Err(Error::invalid("arrival spec", "packet size must be positive"));
        }
        let cdf = cumulative(&probabilities);
        Ok(ArrivalSpec {
            probabilities,
            packet_bits,
            cdf,
        })
    }

    /// `A(t)` is the number of successes among `n` independent Bernoulli(`p`)
    /// sensors.
    pub fn binomial(n: usize, p: f64, packet_bits: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid("arrival spec", "Bernoulli probability must lie in [0, 1]"));
        }
        let probabilities = (0..=n)
            .map(|a| binomial_coefficient(n, a) * p.powi(a as i32) * (1.0 - p).powi((n - a) as i32))
            .collect();
        ArrivalSpec::new(probabilities, packet_bits)
    }

    /// Always exactly `a` packets, on the support `{0, ..., max_packets}`.
    pub fn point_mass(a: usize, max_packets: usize, packet_bits: f64) -> Result<Self> {
        if a > max_packets {
            return Err(Error::invalid("arrival spec", "point mass outside support"));
        }
        let mut probabilities = vec![0.0; max_packets + 1];
        probabilities[a] = 1.0;
        ArrivalSpec::new(probabilities, packet_bits)
    }

    pub fn max_packets(&self) -> usize {
        self.probabilities.len() - 1
    }

    pub fn packet_bits(&self) -> f64 {
        self.packet_bits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn prob(&self, a: usize) -> f64 {
        self.probabilities.get(a).copied().unwrap_or(0.0)
    }

    /// `E[A]`
    pub fn mean(&self) -> f64 {
        self.support().map(|(a, p)| a as f64 * p).sum()
    }

    /// `E[A^2]`
    pub fn second_moment(&self) -> f64 {
        self.support().map(|(a, p)| (a * a) as f64 * p).sum()
    }

    /// Raw (uncompressed) bit arrival rate `b E[A]`.
    pub fn raw_rate(&self) -> f64 {
        self.packet_bits * self.mean()
    }

    /// Same distribution, different packet size.
    pub fn with_packet_bits(&self, packet_bits: f64) -> Result<Self> {
        ArrivalSpec::new(self.probabilities.clone(), packet_bits)
    }

    /// `(a, p_A(a))` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probabilities.iter().copied().enumerate()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        draw_index(&self.cdf, rng)
    }
}

fn binomial_coefficient(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
