//! Numerical core for benchmarking entanglement detection criteria on
//! Haar-random bipartite mixed states.
//!
//! * [`qmat`]: density matrices and the linear-algebra maps on them.
//! * [`sampling`]: seed-reproducible rank-`k` states from Ginibre pure states.
//! * [`criteria`]: partial transpose, reduction, majorization, entropy and
//!   realignment criteria plus logarithmic negativity.
//! * [`analytics`]: per-cell statistics and closed-form predictors.
//!
//! The numerical modules are generic over [`Real`] (`f32` or `f64`); the
//! crate root exports `f64` aliases used by the batch harness.

pub mod analytics;
pub mod criteria;
pub mod error;
pub mod qmat;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub use criteria::Criterion;
pub use qmat::{LogBase, Subsystem};
pub use sampling::SampleSpec;

pub type ComplexMatrix = qmat::ComplexMatrix<f64>;
pub type DensityMatrix = qmat::DensityMatrix<f64>;
pub type Spectrum = qmat::Spectrum<f64>;
pub type Verdict = criteria::Verdict<f64>;
pub type StateRecord = criteria::StateRecord<f64>;

pub type ComplexMatrixF32 = qmat::ComplexMatrix<f32>;
pub type DensityMatrixF32 = qmat::DensityMatrix<f32>;
