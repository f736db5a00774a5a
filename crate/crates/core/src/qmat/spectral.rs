use nalgebra::{SymmetricEigen, SVD};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative Hermiticity tolerance accepted by the eigen-solvers.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-CLIP_TOL, 0)` are treated as round-off and clipped to zero.
pub const CLIP_TOL: f64 = 1e-10;
/// Eigenvalues at or below this contribute nothing to an entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-14;

const MAX_SWEEPS_PER_DIM: usize = 1000;

/// Real eigenvalues sorted in non-increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T: Real> {
    eigenvalues: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    /// Sorts `values` descending.
    pub fn from_unsorted(mut values: Vec<T>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Self {
            eigenvalues: values,
        }
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn count(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::zero)
    }

    pub fn min(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }

    pub fn sum(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |a, &b| a + b)
    }

    /// `Σ |λ|`, the trace norm of the underlying Hermitian matrix.
    pub fn abs_sum(&self) -> T {
        self.eigenvalues.iter().fold(T::zero(), |a, &b| a + b.abs())
    }

    /// Eigenvalues clipped into `[0, 1]`.
    pub fn clipped(&self) -> Vec<T> {
        self.eigenvalues
            .iter()
            .map(|&x| x.max(T::zero()).min(T::one()))
            .collect()
    }

    /// `Σ λ²` over the clipped eigenvalues.
    pub fn purity(&self) -> T {
        self.clipped().iter().fold(T::zero(), |a, &b| a + b * b)
    }

    /// Number of eigenvalues strictly above `tol`.
    pub fn numerical_rank(&self, tol: T) -> usize {
        self.eigenvalues.iter().filter(|&&x| x > tol).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Two,
    E,
}

fn check_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let dev = m.hermiticity_deviation();
    let scale = m.max_abs().max(T::one());
    if dev > T::tol(HERMITIAN_TOL) * scale {
        return Err(Error::NotHermitian {
            deviation: dev.as_f64(),
        });
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_spectrum<T: Real>(m: &ComplexMatrix<T>) -> Result<Spectrum<T>> {
    check_hermitian(m)?;
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(
        m.as_inner().clone(),
        T::default_epsilon(),
        MAX_SWEEPS_PER_DIM * n.max(1),
    )
    .ok_or(Error::Numerical("Hermitian eigensolver did not converge"))?;
    Ok(Spectrum::from_unsorted(eig.eigenvalues.iter().copied().collect()))
}

/// Eigenvalues (descending) and the matching unit eigenvectors as columns.
pub fn hermitian_eigendecomposition<T: Real>(
    m: &ComplexMatrix<T>,
) -> Result<(Spectrum<T>, ComplexMatrix<T>)> {
    check_hermitian(m)?;
    let n = m.nrows();
    let eig = SymmetricEigen::try_new(
        m.as_inner().clone(),
        T::default_epsilon(),
        MAX_SWEEPS_PER_DIM * n.max(1),
    )
    .ok_or(Error::Numerical("Hermitian eigensolver did not converge"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = nalgebra::DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((
        Spectrum {
            eigenvalues: values,
        },
        ComplexMatrix::from_inner_unchecked(vectors),
    ))
}

/// Singular values of `m`, sorted descending.
pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let n = m.nrows().max(m.ncols()).max(1);
    let svd = SVD::try_new(
        m.as_inner().clone(),
        false,
        false,
        T::default_epsilon(),
        MAX_SWEEPS_PER_DIM * n,
    )
    .ok_or(Error::Numerical("singular value decomposition did not converge"))?;
    let mut s: Vec<T> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(s)
}

/// `‖M‖₁ = Tr √(M†M)`, the sum of singular values.
pub fn trace_norm<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    Ok(singular_values(m)?
        .into_iter()
        .fold(T::zero(), |a, b| a + b))
}

/// `-Σ λ log λ` over the spectrum clipped into `[0, 1]`; eigenvalues at or
/// below [`ENTROPY_CUTOFF`] contribute zero.
pub fn von_neumann_entropy<T: Real>(spectrum: &Spectrum<T>, base: LogBase) -> T {
    let cutoff = T::tol(ENTROPY_CUTOFF);
    let mut s = T::zero();
    for p in spectrum.clipped() {
        if p > cutoff {
            s -= p * p.ln();
        }
    }
    let s = match base {
        LogBase::E => s,
        LogBase::Two => s / T::lit(2.0).ln(),
    };
    s.max(T::zero())
}
