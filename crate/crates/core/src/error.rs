use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value violates a type invariant at construction or load time.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The scenario admits no stabilizing (or distortion-feasible) policy.
    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unknown preset `{0}` (expected scenario1, scenario2 or scenario3)")]
    UnknownPreset(String),

    #[error("bad override `{key}`: {reason}")]
    Override { key: String, reason: String },

    #[error("run {index} failed: {source}")]
    Run {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
