//! Dense complex linear algebra for bipartite density matrices: the
//! reshaping maps (partial transpose, partial trace, realignment), spectral
//! routines, norms and entropies consumed by the detection criteria.
//!
//! All routines are pure functions of immutable inputs.

mod density;
mod maps;
mod matrix;
mod spectral;

pub use density::{DensityMatrix, CONSTRUCTION_HERMITIAN_TOL, PSD_TOL, TRACE_TOL};
pub use maps::{
    partial_trace, partial_transpose, partial_transpose_matrix, purity, realign, realign_matrix,
    Subsystem,
};
pub use matrix::ComplexMatrix;
pub use spectral::{
    hermitian_eigendecomposition, hermitian_spectrum, singular_values, trace_norm,
    von_neumann_entropy, LogBase, Spectrum, CLIP_TOL, ENTROPY_CUTOFF, HERMITIAN_TOL,
};
