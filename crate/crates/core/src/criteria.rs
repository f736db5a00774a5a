//! The five detection criteria and logarithmic negativity.
//!
//! Every criterion yields a [`Verdict`] carrying a continuous witness. The
//! thresholds are strict with a shared `eps`, so boundary states (for example
//! a realignment sum of exactly 1) are reported as not detected:
//!
//! | criterion     | witness                                             | detected      |
//! |---------------|-----------------------------------------------------|---------------|
//! | PT            | `λ_min(ρ^{T₁})`                                     | `w < −eps`    |
//! | reduction     | `min(λ_min(ρ₁⊗I − ρ), λ_min(I⊗ρ₂ − ρ))`             | `w < −eps`    |
//! | majorization  | largest prefix-sum excess of `λ(ρ)` over a marginal | `w > eps`     |
//! | entropy       | `min(S₁₂ − S₁, S₁₂ − S₂)` in nats                   | `w < −eps`    |
//! | realignment   | `‖ρ^{R}‖₁ − 1`                                      | `w > eps`     |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    hermitian_spectrum, partial_trace, partial_transpose, realign, trace_norm,
    von_neumann_entropy, ComplexMatrix, DensityMatrix, LogBase, Spectrum, Subsystem,
};
use crate::sampling::SampleSpec;
use crate::scalar::Real;

/// Trace norms within this distance of 1 give a logarithmic negativity of 0.
pub const LN_CLIP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "PT")]
    PartialTranspose,
    #[serde(rename = "Rd")]
    Reduction,
    #[serde(rename = "M")]
    Majorization,
    #[serde(rename = "E")]
    Entropy,
    #[serde(rename = "Rl")]
    Realignment,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::PartialTranspose,
        Criterion::Reduction,
        Criterion::Majorization,
        Criterion::Entropy,
        Criterion::Realignment,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Short column label used in result tables.
    pub fn label(self) -> &'static str {
        match self {
            Criterion::PartialTranspose => "PT",
            Criterion::Reduction => "Rd",
            Criterion::Majorization => "M",
            Criterion::Entropy => "E",
            Criterion::Realignment => "Rl",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Criterion::PartialTranspose => "partial transpose",
            Criterion::Reduction => "reduction",
            Criterion::Majorization => "majorization",
            Criterion::Entropy => "entropy",
            Criterion::Realignment => "realignment",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Criterion::ALL
            .into_iter()
            .find(|c| c.label().to_ascii_lowercase() == lower || c.name().replace(' ', "-") == lower)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown criterion '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict<T: Real> {
    pub criterion: Criterion,
    pub detected: bool,
    pub witness: T,
}

impl<T: Real> Verdict<T> {
    fn below(criterion: Criterion, witness: T, eps: T) -> Self {
        Self {
            criterion,
            detected: witness < -eps,
            witness,
        }
    }

    fn above(criterion: Criterion, witness: T, eps: T) -> Self {
        Self {
            criterion,
            detected: witness > eps,
            witness,
        }
    }
}

/// All six outputs for one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation<T: Real> {
    pub ln: T,
    pub verdicts: [Verdict<T>; 5],
}

impl<T: Real> Evaluation<T> {
    pub fn verdict(&self, c: Criterion) -> &Verdict<T> {
        &self.verdicts[c.index()]
    }
}

/// One sampled state's evaluation together with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord<T: Real> {
    pub spec: SampleSpec,
    pub ln: T,
    pub verdicts: [Verdict<T>; 5],
}

impl<T: Real> StateRecord<T> {
    pub fn verdict(&self, c: Criterion) -> &Verdict<T> {
        &self.verdicts[c.index()]
    }

    pub fn detected(&self, c: Criterion) -> bool {
        self.verdicts[c.index()].detected
    }
}

/// `log₂(1 + 2·eps)`: the logarithmic negativity of a state whose only
/// negative partial-transpose eigenvalue is `−eps`.
pub fn ln_threshold(eps: f64) -> f64 {
    (1.0 + 2.0 * eps).log2()
}

fn ln_from_trace_norm<T: Real>(tn: T) -> T {
    if (tn - T::one()).abs() <= T::tol(LN_CLIP_TOL) {
        T::zero()
    } else {
        tn.log2().max(T::zero())
    }
}

/// `ρ₁ ⊗ I₂ − ρ` and `I₁ ⊗ ρ₂ − ρ`.
pub fn reduction_operators<T: Real>(rho: &DensityMatrix<T>) -> Result<[ComplexMatrix<T>; 2]> {
    let r1 = partial_trace(rho, Subsystem::Second)?;
    let r2 = partial_trace(rho, Subsystem::First)?;
    Ok(reduction_operators_from(rho, &r1, &r2))
}

fn reduction_operators_from<T: Real>(
    rho: &DensityMatrix<T>,
    r1: &DensityMatrix<T>,
    r2: &DensityMatrix<T>,
) -> [ComplexMatrix<T>; 2] {
    let id1 = ComplexMatrix::identity(rho.d1());
    let id2 = ComplexMatrix::identity(rho.d2());
    [
        r1.matrix().kron(&id2).sub(rho.matrix()),
        id1.kron(r2.matrix()).sub(rho.matrix()),
    ]
}

/// `max_l (Σ_{i≤l} λᵢ(global) − Σ_{i≤l} λᵢ(marginal))` over clipped, sorted
/// spectra with the shorter list zero-padded.
pub fn majorization_excess<T: Real>(global: &Spectrum<T>, marginal: &Spectrum<T>) -> T {
    let g = global.clipped();
    let m = marginal.clipped();
    let len = g.len().max(m.len());
    let (mut sg, mut sm) = (T::zero(), T::zero());
    let mut best = -T::one();
    for l in 0..len {
        sg += g.get(l).copied().unwrap_or_else(T::zero);
        sm += m.get(l).copied().unwrap_or_else(T::zero);
        best = best.max(sg - sm);
    }
    best
}

struct Marginals<T: Real> {
    first: DensityMatrix<T>,
    second: DensityMatrix<T>,
}

impl<T: Real> Marginals<T> {
    fn of(rho: &DensityMatrix<T>) -> Result<Self> {
        Ok(Self {
            first: partial_trace(rho, Subsystem::Second)?,
            second: partial_trace(rho, Subsystem::First)?,
        })
    }
}

fn reduction_verdict<T: Real>(rho: &DensityMatrix<T>, m: &Marginals<T>, eps: T) -> Result<Verdict<T>> {
    let [a, b] = reduction_operators_from(rho, &m.first, &m.second);
    let w = hermitian_spectrum(&a)?.min().min(hermitian_spectrum(&b)?.min());
    Ok(Verdict::below(Criterion::Reduction, w, eps))
}

fn majorization_verdict<T: Real>(rho: &DensityMatrix<T>, m: &Marginals<T>, eps: T) -> Verdict<T> {
    let w = majorization_excess(rho.spectrum(), m.first.spectrum())
        .max(majorization_excess(rho.spectrum(), m.second.spectrum()));
    Verdict::above(Criterion::Majorization, w, eps)
}

fn entropy_verdict<T: Real>(rho: &DensityMatrix<T>, m: &Marginals<T>, eps: T) -> Verdict<T> {
    let s12 = von_neumann_entropy(rho.spectrum(), LogBase::E);
    let s1 = von_neumann_entropy(m.first.spectrum(), LogBase::E);
    let s2 = von_neumann_entropy(m.second.spectrum(), LogBase::E);
    Verdict::below(Criterion::Entropy, (s12 - s1).min(s12 - s2), eps)
}

fn realignment_verdict<T: Real>(rho: &DensityMatrix<T>, eps: T) -> Result<Verdict<T>> {
    let w = trace_norm(&realign(rho))? - T::one();
    Ok(Verdict::above(Criterion::Realignment, w, eps))
}

pub fn detect_pt<T: Real>(rho: &DensityMatrix<T>, eps: T) -> Result<Verdict<T>> {
    let s = hermitian_spectrum(&partial_transpose(rho, Subsystem::First))?;
    Ok(Verdict::below(Criterion::PartialTranspose, s.min(), eps))
}

pub fn detect_reduction<T: Real>(rho: &DensityMatrix<T>, eps: T) -> Result<Verdict<T>> {
    reduction_verdict(rho, &Marginals::of(rho)?, eps)
}

pub fn detect_majorization<T: Real>(rho: &DensityMatrix<T>, eps: T) -> Result<Verdict<T>> {
    Ok(majorization_verdict(rho, &Marginals::of(rho)?, eps))
}

pub fn detect_entropy<T: Real>(rho: &DensityMatrix<T>, eps: T) -> Result<Verdict<T>> {
    Ok(entropy_verdict(rho, &Marginals::of(rho)?, eps))
}

pub fn detect_realignment<T: Real>(rho: &DensityMatrix<T>, eps: T) -> Result<Verdict<T>> {
    realignment_verdict(rho, eps)
}

/// `log₂ ‖ρ^{T₂}‖₁`, set to 0 when the trace norm is within
/// [`LN_CLIP_TOL`] of 1.
pub fn log_negativity<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let pt = partial_transpose(rho, Subsystem::Second);
    Ok(ln_from_trace_norm(hermitian_spectrum(&pt)?.abs_sum()))
}

/// Runs every criterion, sharing the partial-transpose spectrum and the
/// marginals. `ρ^{T₂} = (ρ^{T₁})ᵀ`, so the negativity is read off the same
/// spectrum the PT verdict uses.
pub fn evaluate<T: Real>(rho: &DensityMatrix<T>, eps: T) -> Result<Evaluation<T>> {
    let pt = hermitian_spectrum(&partial_transpose(rho, Subsystem::First))?;
    let m = Marginals::of(rho)?;
    let verdicts = [
        Verdict::below(Criterion::PartialTranspose, pt.min(), eps),
        reduction_verdict(rho, &m, eps)?,
        majorization_verdict(rho, &m, eps),
        entropy_verdict(rho, &m, eps),
        realignment_verdict(rho, eps)?,
    ];
    Ok(Evaluation {
        ln: ln_from_trace_norm(pt.abs_sum()),
        verdicts,
    })
}

pub fn evaluate_state<T: Real>(
    rho: &DensityMatrix<T>,
    spec: SampleSpec,
    eps: T,
) -> Result<StateRecord<T>> {
    if rho.d1() != spec.d1 || rho.d2() != spec.d2 {
        return Err(Error::InvalidSpec(format!(
            "state is {}x{} but spec says {}x{}",
            rho.d1(),
            rho.d2(),
            spec.d1,
            spec.d2
        )));
    }
    let e = evaluate(rho, eps)?;
    Ok(StateRecord {
        spec,
        ln: e.ln,
        verdicts: e.verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Complex;

    fn bell() -> DensityMatrix<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex::new(0.0, 0.0);
        DensityMatrix::from_state_vector(2, 2, &[Complex::new(s, 0.0), z, z, Complex::new(s, 0.0)])
            .unwrap()
    }

    #[test]
    fn criterion_labels_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(c.label().parse::<Criterion>().unwrap(), c);
            assert_eq!(c.name().replace(' ', "-").parse::<Criterion>().unwrap(), c);
        }
        assert!("nope".parse::<Criterion>().is_err());
    }

    #[test]
    fn majorization_padding() {
        let g = Spectrum::from_unsorted(vec![1.0f64, 0.0, 0.0, 0.0]);
        let m = Spectrum::from_unsorted(vec![0.5f64, 0.5]);
        assert!((majorization_excess(&g, &m) - 0.5).abs() < 1e-15);
        let g = Spectrum::from_unsorted(vec![0.25f64; 4]);
        assert!(majorization_excess(&g, &m).abs() < 1e-15);
    }

    #[test]
    fn ln_clip_band() {
        assert_eq!(ln_from_trace_norm(1.0 + 5e-13), 0.0);
        assert_eq!(ln_from_trace_norm(1.0 - 5e-13), 0.0);
        assert!(ln_from_trace_norm(1.0 + 1e-9) > 0.0);
        assert!((ln_from_trace_norm(2.0f64) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reduction_operators_of_bell() {
        let [a, b] = reduction_operators(&bell()).unwrap();
        assert!((hermitian_spectrum(&a).unwrap().min() + 0.5).abs() < 1e-12);
        assert!((hermitian_spectrum(&b).unwrap().min() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn evaluate_state_checks_dimensions() {
        let spec = SampleSpec::new(2, 3, 1, 0, 0).unwrap();
        assert!(evaluate_state(&bell(), spec, 1e-10).is_err());
    }

    #[test]
    fn ln_threshold_value() {
        let want = 2e-10 / std::f64::consts::LN_2;
        assert!((ln_threshold(1e-10) - want).abs() < 1e-6 * want);
    }
}
