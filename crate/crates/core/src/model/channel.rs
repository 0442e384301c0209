use rand::Rng;
use serde::{Deserialize, Serialize};

use super::arrival::{check_distribution, cumulative, draw_index};
use crate::error::{Error, Result};

/// Index of a channel state within its [`ChannelSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChannelState(pub usize);

/// I.i.d. channel state process over a finite set of named states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRepr", into = "ChannelRepr")]
pub struct ChannelSpec {
    states: Vec<String>,
    probabilities: Vec<f64>,
    cdf: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    states: Vec<String>,
    probabilities: Vec<f64>,
}

impl TryFrom<ChannelRepr> for ChannelSpec {
    type Error = Error;

    fn try_from(repr: ChannelRepr) -> Result<Self> {
        ChannelSpec::new(repr.states, repr.probabilities)
    }
}

impl From<ChannelSpec> for ChannelRepr {
    fn from(spec: ChannelSpec) -> Self {
        ChannelRepr {
            states: spec.states,
            probabilities: spec.probabilities,
        }
    }
}

impl ChannelSpec {
    pub fn new(states: Vec<String>, probabilities: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::invalid("channel spec", "at least one state is required"));
        }
        if states.len() != probabilities.len() {
            return Err(Error::invalid(
                "channel spec",
                "one probability per state is required",
            ));
        }
        check_distribution("channel spec", &probabilities)?;
        let cdf = cumulative(&probabilities);
        Ok(ChannelSpec {
            states,
            probabilities,
            cdf,
        })
    }

    /// A channel that never changes.
    pub fn constant(name: &str) -> Self {
        ChannelSpec::new(vec![name.to_owned()], vec![1.0]).expect("single state is valid")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_static(&self) -> bool {
        self.states.len() == 1
    }

    pub fn name(&self, s: ChannelState) -> Option<&str> {
        self.states.get(s.0).map(String::as_str)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `(s, pi_s)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (ChannelState, f64)> + '_ {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(i, &p)| (ChannelState(i), p))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelState {
        ChannelState(draw_index(&self.cdf, rng))
    }
}
