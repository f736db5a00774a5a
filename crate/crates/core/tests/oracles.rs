//! Closed-form and hand-built reference values for the criteria.

mod common;

use common::*;
use entdetect_core::criteria::{
    detect_entropy, detect_majorization, detect_pt, detect_realignment, detect_reduction,
    evaluate, evaluate_state, log_negativity,
};
use entdetect_core::qmat::{
    hermitian_spectrum, partial_transpose, realign, trace_norm, ComplexMatrix, DensityMatrix,
};
use entdetect_core::sampling::RngStream;
use entdetect_core::{Criterion, SampleSpec, Subsystem};

const EPS: f64 = 1e-10;

#[test]
fn bell_state_oracles() {
    let rho = bell();
    let pt = detect_pt(&rho, EPS).unwrap();
    assert!(pt.detected);
    assert!((pt.witness + 0.5).abs() < 1e-9);

    let rd = detect_reduction(&rho, EPS).unwrap();
    assert!(rd.detected);
    assert!((rd.witness + 0.5).abs() < 1e-9);

    let m = detect_majorization(&rho, EPS).unwrap();
    assert!(m.detected);
    assert!((m.witness - 0.5).abs() < 1e-9);

    let e = detect_entropy(&rho, EPS).unwrap();
    assert!(e.detected);
    assert!((e.witness + 2f64.ln()).abs() < 1e-9);

    let rl = detect_realignment(&rho, EPS).unwrap();
    assert!(rl.detected);
    assert!((rl.witness - 1.0).abs() < 1e-9);

    assert!((log_negativity(&rho).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn bell_record_detects_everything() {
    let spec = SampleSpec::new(2, 2, 1, 0, 0).unwrap();
    let r = evaluate_state(&bell(), spec, EPS).unwrap();
    assert!((r.ln - 1.0).abs() < 1e-9);
    assert!(Criterion::ALL.iter().all(|&c| r.detected(c)));
}

#[test]
fn maximally_mixed_and_product_detect_nothing() {
    for (d1, d2) in [(2, 2), (2, 5), (3, 4)] {
        let mm = DensityMatrix::<f64>::maximally_mixed(d1, d2).unwrap();
        let e = evaluate(&mm, EPS).unwrap();
        assert_eq!(e.ln, 0.0);
        assert!(Criterion::ALL.iter().all(|&c| !e.verdict(c).detected));
        let rl = e.verdict(Criterion::Realignment).witness;
        assert!((rl - (1.0 / ((d1 * d2) as f64).sqrt() - 1.0)).abs() < 1e-12);
    }
    let a = [c(0.6, 0.1), c(-0.3, 0.7)];
    let b = [c(0.2, 0.0), c(0.5, -0.5), c(0.1, 0.3)];
    let rho = product_pure(&a, &b);
    let e = evaluate(&rho, EPS).unwrap();
    assert_eq!(e.ln, 0.0);
    assert!(Criterion::ALL.iter().all(|&c| !e.verdict(c).detected));
    // Boundary case: realignment sum exactly one.
    assert!(e.verdict(Criterion::Realignment).witness.abs() < 1e-12);
    assert!(e.verdict(Criterion::Majorization).witness.abs() < 1e-12);
}

/// Werner PT spectrum in closed form: three eigenvalues (1+p)/4, one (1−3p)/4.
fn werner_pt_min(p: f64) -> f64 {
    ((1.0 - 3.0 * p) / 4.0).min((1.0 + p) / 4.0)
}

#[test]
fn werner_partial_transpose_matches_closed_form() {
    for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let rho = werner(p);
        let eigs = sorted_eigs(&partial_transpose(&rho, Subsystem::First));
        let mut want = vec![(1.0 + p) / 4.0; 3];
        want.push((1.0 - 3.0 * p) / 4.0);
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (a, b) in eigs.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "p={p}: {eigs:?} vs {want:?}");
        }
    }
    let v = detect_pt(&werner(0.5), EPS).unwrap();
    assert!(v.detected);
    assert!((v.witness - werner_pt_min(0.5)).abs() < 1e-12);
    assert!((v.witness + 0.125).abs() < 1e-12);
    let v = detect_pt(&werner(0.2), EPS).unwrap();
    assert!(!v.detected);
    assert!((v.witness - 0.1).abs() < 1e-12);
}

#[test]
fn werner_log_negativity() {
    // One negative eigenvalue λ: ‖ρ^Γ‖₁ = 1 + 2|λ|.
    let want = (1.0f64 + 2.0 * 0.125).log2();
    assert!((log_negativity(&werner(0.5)).unwrap() - want).abs() < 1e-12);
    assert!((want - 0.3219).abs() < 1e-4);
    assert_eq!(log_negativity(&werner(0.2)).unwrap(), 0.0);
}

/// S₁₂ of the Werner family from its closed-form spectrum.
fn werner_s12(p: f64) -> f64 {
    let a = (1.0 + 3.0 * p) / 4.0;
    let b = (1.0 - p) / 4.0;
    let h = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    h(a) + 3.0 * h(b)
}

#[test]
fn werner_entropy_boundary() {
    // Bisection on S₁₂(p) − S₁ with S₁ = ln 2 (decreasing in p).
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if werner_s12(mid) - 2f64.ln() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p_star = 0.5 * (lo + hi);
    assert!(p_star > 0.6 && p_star < 0.9);

    assert!(detect_entropy(&werner(0.9), EPS).unwrap().detected);
    assert!(!detect_entropy(&werner(0.6), EPS).unwrap().detected);
    assert!(!detect_entropy(&werner(p_star - 1e-4), EPS).unwrap().detected);
    assert!(detect_entropy(&werner(p_star + 1e-4), EPS).unwrap().detected);
    for p in [0.1, 0.5, 0.7, 0.95] {
        let w = detect_entropy(&werner(p), EPS).unwrap().witness;
        assert!((w - (werner_s12(p) - 2f64.ln())).abs() < 1e-12);
    }
}

#[test]
fn bell_realigned_matrix_trace_norm() {
    assert!((trace_norm(&realign(&bell())).unwrap() - 2.0).abs() < 1e-9);
}

/// Independent route to the trace norm: Σ √λ of the smaller Gram matrix
/// (the larger one carries round-off zeros whose square roots are ~1e-8).
fn trace_norm_via_gram(a: &ComplexMatrix<f64>) -> f64 {
    let gram = if a.nrows() <= a.ncols() {
        a.mul(&a.adjoint())
    } else {
        a.adjoint().mul(a)
    }
    .hermitian_part();
    hermitian_spectrum(&gram)
        .unwrap()
        .eigenvalues()
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .sum()
}

#[test]
fn trace_norm_matches_gram_route() {
    let mut s = RngStream::new(2024, 0);
    for (r, c) in [(3, 3), (4, 9), (9, 4), (2, 7)] {
        let entries: Vec<_> = (0..r * c).map(|_| s.complex_gaussian::<f64>()).collect();
        let m = ComplexMatrix::from_row_slice(r, c, &entries).unwrap();
        let a = trace_norm(&m).unwrap();
        let b = trace_norm_via_gram(&m);
        assert!((a - b).abs() < 1e-10 * b.max(1.0), "{r}x{c}: {a} vs {b}");
    }
}

#[test]
fn log_negativity_uses_second_subsystem_transpose() {
    let mut s = RngStream::new(77, 0);
    for trial in 0..20 {
        let spec = SampleSpec::new(2, 3, 2, 99, trial).unwrap();
        let rho: DensityMatrix<f64> = entdetect_core::sampling::sample_reduced_state(&spec).unwrap();
        let direct = log_negativity(&rho).unwrap();
        let via_t2 = {
            let tn = hermitian_spectrum(&partial_transpose(&rho, Subsystem::Second))
                .unwrap()
                .abs_sum();
            if (tn - 1.0f64).abs() <= 1e-12 { 0.0 } else { tn.log2() }
        };
        let shared = evaluate(&rho, EPS).unwrap().ln;
        assert!((direct - via_t2).abs() < 1e-14);
        assert!((direct - shared).abs() < 1e-12);
        let _ = s.gaussian::<f64>();
    }
}

#[test]
fn single_precision_path() {
    let s = std::f32::consts::FRAC_1_SQRT_2;
    let z = entdetect_core::Complex::new(0.0f32, 0.0);
    let o = entdetect_core::Complex::new(s, 0.0);
    let rho = DensityMatrix::<f32>::from_state_vector(2, 2, &[o, z, z, o]).unwrap();
    let e = evaluate(&rho, 1e-5f32).unwrap();
    assert!((e.ln - 1.0).abs() < 1e-5);
    assert!(Criterion::ALL.iter().all(|&c| e.verdict(c).detected));
    let spec = SampleSpec::new(2, 4, 3, 1, 2).unwrap();
    let r32: DensityMatrix<f32> = entdetect_core::sampling::sample_reduced_state(&spec).unwrap();
    let r64: DensityMatrix<f64> = entdetect_core::sampling::sample_reduced_state(&spec).unwrap();
    assert!((r32.matrix()[(0, 0)].re as f64 - r64.matrix()[(0, 0)].re).abs() < 1e-5);
}
