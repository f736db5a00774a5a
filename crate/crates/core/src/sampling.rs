//! Seed-reproducible Haar-uniform sampling.
//!
//! A rank-`k` state on `d1 ⊗ d2` is the marginal of a Haar-random pure state
//! on `d1 ⊗ d2 ⊗ k`. The pure state's coefficients are i.i.d. complex
//! Gaussians `a + ib` with `a, b ~ N(0, 1)`, normalized afterwards.
//!
//! Every trial owns an independent ChaCha20 stream keyed by
//! `(master_seed, trial_index)`: the seed bytes carry `master_seed` and the
//! re-draw attempt, the 64-bit stream id carries `trial_index`. Normal
//! variates come from `rand_distr::StandardNormal` (ziggurat) sampled in
//! `f64` and then converted, so `f32` and `f64` builds consume identical
//! streams. Results depend on nothing but the key.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    hermitian_spectrum, partial_transpose, ComplexMatrix, DensityMatrix, Subsystem,
};
use crate::scalar::{Complex, Real};

/// Default absolute threshold on the minimum partial-transpose eigenvalue.
pub const DEFAULT_EPS: f64 = 1e-10;
/// Eigenvalues above this count toward the numerical rank.
pub const RANK_TOL: f64 = 1e-10;

const SEED_TAG: &[u8; 12] = b"entdetect/hr";

/// One sample's coordinates: the bipartition, target rank and RNG key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleSpec {
    pub d1: usize,
    pub d2: usize,
    pub k: usize,
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SampleSpec {
    pub fn new(d1: usize, d2: usize, k: usize, master_seed: u64, trial_index: u64) -> Result<Self> {
        let spec = Self {
            d1,
            d2,
            k,
            master_seed,
            trial_index,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d1 < 2 || self.d2 < 2 {
            return Err(Error::InvalidSpec(format!(
                "both subsystem dimensions must be at least 2, got {}x{}",
                self.d1, self.d2
            )));
        }
        if self.k == 0 || self.k > self.d1 * self.d2 {
            return Err(Error::InvalidSpec(format!(
                "rank {} outside [1, {}]",
                self.k,
                self.d1 * self.d2
            )));
        }
        Ok(())
    }

    /// Same cell, different trial.
    pub fn with_trial(mut self, trial_index: u64) -> Self {
        self.trial_index = trial_index;
        self
    }
}

/// Deterministic pseudo-random stream for one `(master_seed, trial_index)`.
#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self::substream(master_seed, trial_index, 0)
    }

    /// Stream for re-draw `attempt` of a trial; `attempt = 0` is the primary.
    pub fn substream(master_seed: u64, trial_index: u64, attempt: u32) -> Self {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&master_seed.to_le_bytes());
        seed[8..12].copy_from_slice(&attempt.to_le_bytes());
        seed[12..24].copy_from_slice(SEED_TAG);
        let mut rng = ChaCha20Rng::from_seed(seed);
        rng.set_stream(trial_index);
        Self { rng }
    }

    pub fn gaussian<T: Real>(&mut self) -> T {
        let x: f64 = self.rng.sample(StandardNormal);
        T::lit(x)
    }

    /// `a + ib` with independent standard normal parts, real part drawn first.
    pub fn complex_gaussian<T: Real>(&mut self) -> Complex<T> {
        let re = self.gaussian();
        let im = self.gaussian();
        Complex::new(re, im)
    }

    pub fn uniform_f64(&mut self) -> f64 {
        self.rng.random()
    }
}

/// Normalizes the first draw, re-drawing exactly once if it is numerically
/// zero.
pub(crate) fn normalize_with_redraw<T: Real>(
    mut draw: impl FnMut(u32) -> Vec<Complex<T>>,
    trial_index: u64,
) -> Result<Vec<Complex<T>>> {
    for attempt in 0..2 {
        let v = draw(attempt);
        let norm = v.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        if norm > T::default_epsilon() && norm.is_finite() {
            return Ok(v.into_iter().map(|z| z.unscale(norm)).collect());
        }
    }
    Err(Error::DegenerateDraw { trial_index })
}

/// Haar-random unit vector on `d1 ⊗ d2 ⊗ k`, index `(l, m, c) ↦ (l·d2 + m)·k + c`.
pub fn sample_tripartite_pure<T: Real>(spec: &SampleSpec) -> Result<Vec<Complex<T>>> {
    spec.validate()?;
    let n = spec.d1 * spec.d2 * spec.k;
    normalize_with_redraw(
        |attempt| {
            let mut s = RngStream::substream(spec.master_seed, spec.trial_index, attempt);
            (0..n).map(|_| s.complex_gaussian()).collect()
        },
        spec.trial_index,
    )
}

/// `Tr₃ |ψ⟩⟨ψ|` for `ψ` laid out as in [`sample_tripartite_pure`].
pub fn reduced_state_from_pure<T: Real>(
    psi: &[Complex<T>],
    d1: usize,
    d2: usize,
    k: usize,
) -> Result<DensityMatrix<T>> {
    if psi.len() != d1 * d2 * k {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2 * k,
            actual: psi.len(),
        });
    }
    let a = DMatrix::from_row_slice(d1 * d2, k, psi);
    let rho = &a * a.adjoint();
    DensityMatrix::new(d1, d2, ComplexMatrix::new(rho)?)
}

/// Haar-random rank-`k` state on `d1 ⊗ d2`.
pub fn sample_reduced_state<T: Real>(spec: &SampleSpec) -> Result<DensityMatrix<T>> {
    let psi = sample_tripartite_pure(spec)?;
    reduced_state_from_pure(&psi, spec.d1, spec.d2, spec.k)
}

/// Haar-random `n × n` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<T: Real>(n: usize, stream: &mut RngStream) -> ComplexMatrix<T> {
    let mut g = DMatrix::from_element(n, n, Complex::new(T::zero(), T::zero()));
    for r in 0..n {
        for c in 0..n {
            g[(r, c)] = stream.complex_gaussian();
        }
    }
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..n {
        let d = r[(c, c)];
        let m = d.norm_sqr().sqrt();
        let phase = if m > T::zero() {
            d.unscale(m)
        } else {
            Complex::new(T::one(), T::zero())
        };
        for row in 0..n {
            q[(row, c)] *= phase;
        }
    }
    ComplexMatrix::new(q).expect("QR of a finite matrix is finite")
}

/// `λ_min(ρ^{T₁}) < −eps`.
pub fn is_npt<T: Real>(rho: &DensityMatrix<T>, eps: T) -> Result<bool> {
    let pt = partial_transpose(rho, Subsystem::First);
    Ok(hermitian_spectrum(&pt)?.min() < -eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::purity;

    #[test]
    fn spec_validation() {
        assert!(SampleSpec::new(2, 2, 4, 0, 0).is_ok());
        assert!(SampleSpec::new(1, 4, 2, 0, 0).is_err());
        assert!(SampleSpec::new(2, 3, 0, 0, 0).is_err());
        assert!(SampleSpec::new(2, 3, 7, 0, 0).is_err());
    }

    #[test]
    fn pure_draw_is_normalized_and_deterministic() {
        let spec = SampleSpec::new(2, 5, 4, 42, 0).unwrap();
        let a: Vec<Complex<f64>> = sample_tripartite_pure(&spec).unwrap();
        let b: Vec<Complex<f64>> = sample_tripartite_pure(&spec).unwrap();
        assert_eq!(a.len(), 40);
        let norm: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        let c: Vec<Complex<f64>> = sample_tripartite_pure(&spec.with_trial(1)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn streams_differ_by_seed_and_attempt() {
        let mut a = RngStream::substream(1, 0, 0);
        let mut b = RngStream::substream(1, 0, 1);
        let mut c = RngStream::substream(2, 0, 0);
        let (x, y, z): (f64, f64, f64) = (a.gaussian(), b.gaussian(), c.gaussian());
        assert_ne!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn zero_draw_triggers_one_redraw() {
        let mut calls = 0;
        let v = normalize_with_redraw::<f64>(
            |attempt| {
                calls += 1;
                if attempt == 0 {
                    vec![Complex::new(0.0, 0.0); 3]
                } else {
                    vec![Complex::new(3.0, 0.0), Complex::new(0.0, 4.0), Complex::new(0.0, 0.0)]
                }
            },
            7,
        )
        .unwrap();
        assert_eq!(calls, 2);
        assert!((v[0].re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn second_zero_draw_fails() {
        let err = normalize_with_redraw::<f64>(|_| vec![Complex::new(0.0, 0.0); 2], 9);
        assert_eq!(err, Err(Error::DegenerateDraw { trial_index: 9 }));
    }

    #[test]
    fn rank_one_sample_is_pure() {
        let spec = SampleSpec::new(3, 3, 1, 5, 3).unwrap();
        let rho: DensityMatrix<f64> = sample_reduced_state(&spec).unwrap();
        assert!((purity(&rho) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rank_never_exceeds_k() {
        for k in 1..=6 {
            let spec = SampleSpec::new(2, 3, k, 11, k as u64).unwrap();
            let rho: DensityMatrix<f64> = sample_reduced_state(&spec).unwrap();
            assert_eq!(rho.spectrum().numerical_rank(RANK_TOL), k);
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut s = RngStream::new(3, 0);
        let u: ComplexMatrix<f64> = haar_unitary(5, &mut s);
        let id = u.mul(&u.adjoint());
        assert!(id.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-12);
    }

    #[test]
    fn npt_classification() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex::new(0.0, 0.0);
        let bell =
            DensityMatrix::from_state_vector(2, 2, &[Complex::new(s, 0.0), z, z, Complex::new(s, 0.0)])
                .unwrap();
        assert!(is_npt(&bell, 1e-10).unwrap());
        let mm = DensityMatrix::<f64>::maximally_mixed(3, 3).unwrap();
        assert!(!is_npt(&mm, 1e-10).unwrap());
        let a = DensityMatrix::new(2, 1, ComplexMatrix::from_diagonal(&[0.3, 0.7])).unwrap();
        let b = DensityMatrix::from_state_vector(3, 1, &[Complex::new(1.0, 0.0), Complex::new(0.0, 1.0), z]).unwrap();
        assert!(!is_npt(&DensityMatrix::product(&a, &b).unwrap(), 1e-10).unwrap());
    }
}
