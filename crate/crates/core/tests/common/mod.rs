#![allow(dead_code)]

use entdetect_core::qmat::{ComplexMatrix, DensityMatrix};
use entdetect_core::Complex;

pub fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

pub fn bell() -> DensityMatrix<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::from_state_vector(2, 2, &[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)])
        .unwrap()
}

/// `p|Φ⁺⟩⟨Φ⁺| + (1 − p) I/4`.
pub fn werner(p: f64) -> DensityMatrix<f64> {
    bell()
        .mix(&DensityMatrix::maximally_mixed(2, 2).unwrap(), p)
        .unwrap()
}

pub fn basis_ket(dim: usize, idx: usize) -> Vec<Complex<f64>> {
    (0..dim)
        .map(|i| c(if i == idx { 1.0 } else { 0.0 }, 0.0))
        .collect()
}

/// Pure product `|a⟩ ⊗ |b⟩` from arbitrary (unnormalized) factors.
pub fn product_pure(a: &[Complex<f64>], b: &[Complex<f64>]) -> DensityMatrix<f64> {
    let mut v = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            v.push(*x * *y);
        }
    }
    DensityMatrix::from_state_vector(a.len(), b.len(), &v).unwrap()
}

pub fn sorted_eigs(m: &ComplexMatrix<f64>) -> Vec<f64> {
    entdetect_core::qmat::hermitian_spectrum(m)
        .unwrap()
        .eigenvalues()
        .to_vec()
}
