use std::ops::Index;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{czero, Complex, Real};

/// Dense complex matrix with finite entries.
///
/// Storage is delegated to `nalgebra` (column-major); indexing and the
/// row-slice constructor use row-major logical order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T: Real>(DMatrix<Complex<T>>);

impl<T: Real> ComplexMatrix<T> {
    /// Wraps `m`, rejecting NaN or infinite entries.
    pub fn new(m: DMatrix<Complex<T>>) -> Result<Self> {
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let z = m[(r, c)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_row_slice(rows: usize, cols: usize, entries: &[Complex<T>]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Real row-major entries, convenient for hand-built test matrices.
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let z: Vec<Complex<T>> = entries
            .iter()
            .map(|&x| Complex::new(T::lit(x), T::zero()))
            .collect();
        Self::from_row_slice(rows, cols, &z)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::from_element(rows, cols, czero()))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::from_element(n, n, czero());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        Self(m)
    }

    /// Outer product `|v⟩⟨v|`.
    pub fn outer(v: &[Complex<T>]) -> Self {
        let n = v.len();
        Self(DMatrix::from_fn(n, n, |r, c| v[r] * v[c].conj()))
    }

    pub(crate) fn from_inner_unchecked(m: DMatrix<Complex<T>>) -> Self {
        Self(m)
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn as_inner(&self) -> &DMatrix<Complex<T>> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex<T>> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex<T>> {
        let mut out = Vec::with_capacity(self.nrows() * self.ncols());
        for r in 0..self.nrows() {
            for c in 0..self.ncols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> Complex<T> {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> T {
        let mut acc = T::zero();
        for z in self.0.iter() {
            acc += z.norm_sqr();
        }
        acc.sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.norm_sqr().sqrt()))
    }

    /// `max |m_ij - conj(m_ji)|`; zero for exactly Hermitian matrices.
    pub fn hermiticity_deviation(&self) -> T {
        let n = self.nrows();
        let mut dev = T::zero();
        for r in 0..n {
            for c in r..n {
                let d = self.0[(r, c)] - self.0[(c, r)].conj();
                dev = dev.max(d.norm_sqr().sqrt());
            }
        }
        dev
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self((&self.0 + self.0.adjoint()).map(|z| z * half))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        Self(&u.0 * &self.0 * u.0.adjoint())
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm_sqr().sqrt()))
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, idx: (usize, usize)) -> &Complex<T> {
        &self.0[idx]
    }
}
