use super::matrix::ComplexMatrix;
use super::spectral::{hermitian_spectrum, Spectrum, CLIP_TOL};
use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

/// Relative Hermiticity tolerance at construction.
pub const CONSTRUCTION_HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = CLIP_TOL;

/// Bipartite density matrix on `d1 ⊗ d2`.
///
/// Basis ordering is `|iμ⟩ ↦ i·d2 + μ` (subsystem 1 major). A single-system
/// state is represented with `d2 = 1`.
///
/// Construction checks Hermiticity, unit trace and positivity, then stores
/// the Hermitian part `(M + M†)/2` together with its spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    d1: usize,
    d2: usize,
    mat: ComplexMatrix<T>,
    spectrum: Spectrum<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(d1: usize, d2: usize, mat: ComplexMatrix<T>) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidSpec(format!("zero dimension {d1}x{d2}")));
        }
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() != d1 * d2 {
            return Err(Error::DimensionMismatch {
                expected: d1 * d2,
                actual: mat.nrows(),
            });
        }
        let dev = mat.hermiticity_deviation();
        if dev > T::tol(CONSTRUCTION_HERMITIAN_TOL) * mat.max_abs() {
            return Err(Error::NotHermitian {
                deviation: dev.as_f64(),
            });
        }
        let mat = mat.hermitian_part();
        let trace = mat.trace().re;
        if (trace - T::one()).abs() > T::tol(TRACE_TOL) {
            return Err(Error::InvalidTrace {
                trace: trace.as_f64(),
            });
        }
        let spectrum = hermitian_spectrum(&mat)?;
        if spectrum.min() < -T::tol(PSD_TOL) {
            return Err(Error::NotPositive {
                min_eigenvalue: spectrum.min().as_f64(),
            });
        }
        Ok(Self {
            d1,
            d2,
            mat,
            spectrum,
        })
    }

    /// Single-system state of dimension `dim`.
    pub fn single(dim: usize, mat: ComplexMatrix<T>) -> Result<Self> {
        Self::new(dim, 1, mat)
    }

    /// `|ψ⟩⟨ψ|` for `ψ` normalized here.
    pub fn from_state_vector(d1: usize, d2: usize, psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi
            .iter()
            .fold(T::zero(), |a, z| a + z.norm_sqr())
            .sqrt();
        if norm <= T::default_epsilon() {
            return Err(Error::InvalidSpec("zero state vector".into()));
        }
        let v: Vec<Complex<T>> = psi.iter().map(|z| z.unscale(norm)).collect();
        Self::new(d1, d2, ComplexMatrix::outer(&v))
    }

    pub fn maximally_mixed(d1: usize, d2: usize) -> Result<Self> {
        let n = d1 * d2;
        Self::new(
            d1,
            d2,
            ComplexMatrix::identity(n).scale(T::one() / T::lit(n as f64)),
        )
    }

    /// `ρ_A ⊗ ρ_B`, with `d1 = dim(ρ_A)` and `d2 = dim(ρ_B)`.
    pub fn product(a: &Self, b: &Self) -> Result<Self> {
        Self::new(a.dim(), b.dim(), a.mat.kron(&b.mat))
    }

    /// `p·self + (1 − p)·other` for `p ∈ [0, 1]`.
    pub fn mix(&self, other: &Self, p: T) -> Result<Self> {
        if self.d1 != other.d1 || self.d2 != other.d2 {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Self::new(
            self.d1,
            self.d2,
            self.mat.scale(p).add(&other.mat.scale(T::one() - p)),
        )
    }

    /// `U ρ U†` for a unitary `U` of matching dimension.
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        Self::new(self.d1, self.d2, self.mat.conjugate_by(u))
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    /// Total dimension `d1·d2`.
    pub fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn spectrum(&self) -> &Spectrum<T> {
        &self.spectrum
    }
}
