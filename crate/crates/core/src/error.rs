use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is not 1 (got {trace})")]
    InvalidTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid sample specification: {0}")]
    InvalidSpec(String),

    #[error("numerical routine failed: {0}")]
    Numerical(&'static str),

    #[error("cannot aggregate an empty record list")]
    EmptyRecords,

    #[error("record for {found:?} does not belong to cell {expected:?}")]
    MixedCells {
        expected: (usize, usize, usize),
        found: (usize, usize, usize),
    },

    #[error("pure-state draw was numerically zero after re-draw (trial {trial_index})")]
    DegenerateDraw { trial_index: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
