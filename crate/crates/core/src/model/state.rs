use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Queue state of the link: actual backlog `U`, the place-holder offset
/// `U_thresh`, and the virtual distortion queue `X`.
///
/// The effective backlog `U + U_thresh` is the stored quantity, so decisions
/// driven by it are bit-identical to those of a plain queue started at
/// `U(0) + U_thresh`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkState {
    effective: f64,
    threshold: f64,
    distortion: f64,
}

impl LinkState {
    pub fn new(initial_backlog: f64, threshold: f64) -> Result<Self> {
        if !(initial_backlog.is_finite() && initial_backlog >= 0.0) {
            return Err(Error::invalid("link state", "backlog must be nonnegative"));
        }
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(Error::invalid("link state", "threshold must be nonnegative"));
        }
        Ok(LinkState {
            effective: initial_backlog + threshold,
            threshold,
            distortion: 0.0,
        })
    }

    pub fn empty() -> Self {
        LinkState {
            effective: 0.0,
            threshold: 0.0,
            distortion: 0.0,
        }
    }

    /// Actual backlog `U`, bits.
    pub fn backlog(&self) -> f64 {
        self.effective - self.threshold
    }

    /// Place-holder backlog `U + U_thresh`, bits.
    pub fn effective_backlog(&self) -> f64 {
        self.effective
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Virtual distortion queue `X`.
    pub fn distortion_queue(&self) -> f64 {
        self.distortion
    }

    /// `U <- max(U - mu, 0) + R`.
    pub fn serve_and_admit(self, mu: f64, admitted: f64) -> Self {
        LinkState {
            effective: (self.effective - mu).max(self.threshold) + admitted,
            ..self
        }
    }

    /// `X <- max(X - d_av, 0) + D`.
    pub fn charge_distortion(self, d_av: f64, distortion: f64) -> Self {
        LinkState {
            distortion: (self.distortion - d_av).max(0.0) + distortion,
            ..self
        }
    }
}
