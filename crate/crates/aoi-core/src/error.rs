//! Error type shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Distribution or system constructed with an out-of-range parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Requested quantity has no limiting value. With deterministic
    /// inter-arrivals the steady-state violation probability is only
    /// defined for age limits of at least one inter-arrival time.
    #[error(
        "violation probability does not exist: deterministic arrivals at rate {lambda} \
         require an age limit of at least {min_d}, got {d}"
    )]
    Existence { d: f64, lambda: f64, min_d: f64 },

    /// Simulation or estimator asked for fewer peaks than it needs.
    #[error("need at least {min} peaks, got {got}")]
    TooFewPeaks { got: usize, min: usize },

    /// Operation is not defined for the requested queueing discipline.
    #[error("operation not supported for discipline {0}")]
    UnsupportedDiscipline(String),

    /// The idle-time law before a service is only known for Poisson and
    /// deterministic arrivals.
    #[error("no known idle-time law for arrival family {0}")]
    UnsupportedIdleModel(String),

    /// Event log violates the arrival/departure contract.
    #[error("malformed event log: {0}")]
    MalformedLog(String),

    /// Text input (distribution grammar, scenario field, CSV) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
