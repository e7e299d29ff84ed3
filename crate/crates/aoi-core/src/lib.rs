//! Age-of-Information violation probabilities for single-source
//! single-server systems with at most one buffered packet.
//!
//! The toolkit computes P(age > d) three independent ways and lets them
//! check each other:
//!
//! * [`sample_path`] simulates the bufferless, unit-buffer-with-replacement
//!   and zero-wait disciplines and estimates the violation probability from
//!   the peaks of the age process (renewal-reward over per-peak rewards);
//! * [`analytic`] evaluates closed forms where they exist (deterministic or
//!   Poisson arrivals, exponential service, zero-wait) and a quadrature
//!   route for general service laws;
//! * [`bounds`] draws Monte-Carlo upper bounds valid for any input laws,
//!   plus the matching pathwise lower bound and worst-case budget.
//!
//! [`oracle`] reconstructs the age process directly from the event log and
//! integrates it exactly, independent of the peak machinery, as ground
//! truth for the estimators.
//!
//! All numeric code is generic over the [`real::Real`] scalar; the aliases
//! at the crate root fix `f64` for everyday use.

pub mod analytic;
pub mod bounds;
pub mod dist;
pub mod error;
pub mod oracle;
pub mod quad;
pub mod real;
pub mod rng;
pub mod sample_path;
pub mod stats;

pub use dist::DistributionSpec;
pub use error::{Error, Result};
pub use real::Real;
pub use rng::RngStream;
pub use sample_path::{simulate, simulate_with, Discipline, LogDetail, SystemSpec};

/// f64 aliases for the common concrete instantiation.
pub type Dist64 = dist::DistributionSpec<f64>;
pub type System64 = sample_path::SystemSpec<f64>;
pub type SamplePath64 = sample_path::SamplePath<f64>;
pub type PeakRecord64 = sample_path::PeakRecord<f64>;
pub type Estimate64 = sample_path::Estimate<f64>;
pub type EventLog64 = sample_path::EventLog<f64>;
pub type AnalyticResult64 = analytic::AnalyticResult<f64>;
pub type IdleModel64 = analytic::IdleModel<f64>;
pub type BoundConfig64 = bounds::BoundConfig<f64>;
pub type BoundReport64 = bounds::BoundReport<f64>;
pub type Trajectory64 = oracle::AoiTrajectory<f64>;
