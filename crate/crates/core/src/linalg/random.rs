//! Random matrix ensembles used to generate test instances.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::matrix::ComplexMatrix;
use crate::C64;

/// Standard complex Gaussian: real and imaginary parts i.i.d. `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `n x n` matrix of i.i.d. standard complex Gaussians (Ginibre ensemble).
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary.
///
/// QR-factors a Ginibre matrix column by column with Gram–Schmidt (each
/// projection pass applied twice). Gram–Schmidt produces an `R` whose
/// diagonal is real and positive, which is exactly the phase correction
/// that makes `Q` Haar distributed rather than merely unitary.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1, "haar_unitary needs n >= 1");
    loop {
        let g = ginibre(n, rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
        // rank-deficient draw; probability zero in exact arithmetic
    }
}

fn orthonormalize_columns(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = g.rows();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..n).map(|i| g.get(i, j)).collect()).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: C64 = cols[k].iter().zip(&cols[j]).map(|(q, v)| q.conj() * v).sum();
                let qk = cols[k].clone();
                for (v, q) in cols[j].iter_mut().zip(&qk) {
                    *v -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-10 {
            return None;
        }
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
    }
    Some(ComplexMatrix::from_fn(n, n, |i, j| cols[j][i]))
}

/// GUE-type Hermitian matrix `scale · (G + G*) / 2` for a Ginibre `G`.
///
/// The lower triangle is written as the exact conjugate of the upper
/// triangle, so the result is Hermitian bit-for-bit.
pub fn gue_hermitian<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1, "gue_hermitian needs n >= 1");
    assert!(scale > 0.0, "gue_hermitian needs scale > 0");
    let g = ginibre(n, rng);
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = (g.get(i, j) + g.get(j, i).conj()) * (0.5 * scale);
            if i == j {
                h.set(i, i, C64::new(z.re, 0.0));
            } else {
                h.set(i, j, z);
                h.set(j, i, z.conj());
            }
        }
    }
    h
}

/// `V diag(λ) V*` for a Haar `V`: a Hermitian matrix with prescribed spectrum.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(spectrum: &[f64], rng: &mut R) -> ComplexMatrix {
    let n = spectrum.len();
    let v = haar_unitary(n, rng);
    let d = ComplexMatrix::from_real_diagonal(spectrum);
    let a = crate::linalg::matmul(
        &crate::linalg::matmul(&v, &d).expect("square"),
        &crate::linalg::adjoint(&v),
    )
    .expect("square");
    a.add(&crate::linalg::adjoint(&a))
        .expect("square")
        .scale(C64::new(0.5, 0.0))
}
