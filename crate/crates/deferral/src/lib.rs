//! File formats, scenario handling and command implementations for the
//! `deferral` CLI. The simulation itself lives in `deferral-core`.

pub mod elite;
pub mod error;
pub mod extrapolate;
pub mod manifest;
pub mod pipeline;
pub mod report;
pub mod scenario;
pub mod sites;
pub mod sweep;

pub use error::{Error, Result};
pub use pipeline::{execute, RunResult};
pub use scenario::Scenario;
