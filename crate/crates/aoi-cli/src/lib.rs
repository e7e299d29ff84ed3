//! Library surface of the experiment runner; the `aoi` binary is a thin
//! wrapper over these modules.

pub mod plot;
pub mod runner;
pub mod scenario;
