use nalgebra::DMatrix;

use super::density::DensityMatrix;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{czero, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    First,
    Second,
}

fn check_bipartite<T: Real>(m: &ComplexMatrix<T>, d1: usize, d2: usize) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            actual: m.nrows(),
        });
    }
    Ok(())
}

/// Partial transpose of an arbitrary `d1·d2` square matrix.
///
/// `First`: `⟨jμ|M^{T₁}|iν⟩ = ⟨iμ|M|jν⟩`; `Second`: `⟨iν|M^{T₂}|jμ⟩ = ⟨iμ|M|jν⟩`.
pub fn partial_transpose_matrix<T: Real>(
    m: &ComplexMatrix<T>,
    d1: usize,
    d2: usize,
    subsystem: Subsystem,
) -> Result<ComplexMatrix<T>> {
    check_bipartite(m, d1, d2)?;
    let src = m.as_inner();
    let n = d1 * d2;
    let out = DMatrix::from_fn(n, n, |r, c| {
        let (a, mu) = (r / d2, r % d2);
        let (b, nu) = (c / d2, c % d2);
        match subsystem {
            Subsystem::First => src[(b * d2 + mu, a * d2 + nu)],
            Subsystem::Second => src[(a * d2 + nu, b * d2 + mu)],
        }
    });
    Ok(ComplexMatrix::from_inner_unchecked(out))
}

/// `ρ^{T₁}` or `ρ^{T₂}`. Hermitian with unit trace, not necessarily positive.
pub fn partial_transpose<T: Real>(rho: &DensityMatrix<T>, subsystem: Subsystem) -> ComplexMatrix<T> {
    partial_transpose_matrix(rho.matrix(), rho.d1(), rho.d2(), subsystem)
        .expect("density matrix dimensions are consistent")
}

/// Reduced state on the subsystem that is kept, as a single-system density
/// matrix.
pub fn partial_trace<T: Real>(
    rho: &DensityMatrix<T>,
    traced: Subsystem,
) -> Result<DensityMatrix<T>> {
    let (d1, d2) = (rho.d1(), rho.d2());
    let m = rho.matrix().as_inner();
    let out = match traced {
        Subsystem::Second => DMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).fold(czero(), |acc, mu| acc + m[(i * d2 + mu, j * d2 + mu)])
        }),
        Subsystem::First => DMatrix::from_fn(d2, d2, |mu, nu| {
            (0..d1).fold(czero(), |acc, i| acc + m[(i * d2 + mu, i * d2 + nu)])
        }),
    };
    let dim = out.nrows();
    DensityMatrix::single(dim, ComplexMatrix::from_inner_unchecked(out))
}

/// Realigned matrix of an arbitrary `d1·d2` square matrix: shape `d1² × d2²`,
/// row `(i, j) ↦ i·d1 + j`, column `(μ, ν) ↦ μ·d2 + ν`, entry `⟨iμ|M|jν⟩`.
pub fn realign_matrix<T: Real>(
    m: &ComplexMatrix<T>,
    d1: usize,
    d2: usize,
) -> Result<ComplexMatrix<T>> {
    check_bipartite(m, d1, d2)?;
    let src = m.as_inner();
    let out = DMatrix::from_fn(d1 * d1, d2 * d2, |r, c| {
        let (i, j) = (r / d1, r % d1);
        let (mu, nu) = (c / d2, c % d2);
        src[(i * d2 + mu, j * d2 + nu)]
    });
    Ok(ComplexMatrix::from_inner_unchecked(out))
}

pub fn realign<T: Real>(rho: &DensityMatrix<T>) -> ComplexMatrix<T> {
    realign_matrix(rho.matrix(), rho.d1(), rho.d2())
        .expect("density matrix dimensions are consistent")
}

/// `Tr ρ²`, computed as the squared Frobenius norm.
pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    let f = rho.matrix().frobenius_norm();
    f * f
}
