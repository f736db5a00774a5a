//! Batch Monte Carlo harness for entanglement-detection hierarchies.
//!
//! [`run::RunPlan`] describes a sweep over `(d1, d2, k)` cells,
//! [`sweep::run_sweep`] evaluates it deterministically on a worker pool and
//! [`run::execute`] persists the resulting table with its manifest.
//! [`verify::run_verify`] runs the invariant suites.

pub mod bounds;
pub mod config;
pub mod error;
pub mod manifest;
pub mod run;
pub mod sweep;
pub mod table;
pub mod verify;

pub use config::{Cell, GridEntry, IntRange, SweepConfig, Workers};
pub use error::{HarnessError, Result};
pub use run::{execute, RunOutcome, RunPlan};
pub use sweep::{run_sweep, CellResult};
