//! Eigendecompositions of unitary and Hermitian matrices, and the
//! `exp(i·)` / principal `log` pair built on top of them.
//!
//! Both solvers delegate the iteration itself to `nalgebra` (complex Schur
//! for unitaries, Hermitian QR for Hermitian input) and then enforce the
//! residual contract `||M V - V Λ||_F <= residual_factor · n · ||M||_F`
//! before handing the result back. A decomposition that misses the bound is
//! reported as [`Error::NumericalFailure`], never returned silently.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::matrix::{adjoint, matmul, ComplexMatrix};
use crate::tolerance::Tolerances;
use crate::C64;

const MAX_SWEEPS: usize = 10_000;

/// Eigenvalues together with a matrix whose columns are the matching
/// eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<C64>,
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    /// `||M V - V diag(values)||_F`.
    pub fn residual(&self, m: &ComplexMatrix) -> Result<f64> {
        let mv = matmul(m, &self.vectors)?;
        let vl = matmul(&self.vectors, &ComplexMatrix::from_diagonal(&self.values))?;
        Ok(mv.sub(&vl)?.frobenius_norm())
    }

    /// Real parts of the eigenvalues, in stored order.
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    fn check_residual(&self, m: &ComplexMatrix, tol: &Tolerances, what: &str) -> Result<()> {
        let residual = self.residual(m)?;
        let bound = tol.residual_bound(m.rows(), m.frobenius_norm());
        if residual <= bound {
            Ok(())
        } else {
            Err(Error::NumericalFailure(format!(
                "{what} residual {residual:e} exceeds {bound:e}"
            )))
        }
    }
}

/// Principal argument in `(-π, π]`; values within `branch_tol` of `-π`
/// are mapped to `+π`.
pub fn principal_arg(z: C64, branch_tol: f64) -> f64 {
    let a = z.arg();
    if a <= -PI + branch_tol {
        PI
    } else {
        a
    }
}

/// Eigendecomposition of a unitary matrix.
///
/// The eigenvector matrix is unitary and every eigenvalue has modulus
/// within `1e-9` of one.
pub fn eig_unitary(u: &ComplexMatrix, tol: &Tolerances) -> Result<EigenSystem> {
    let n = u.require_square("eig_unitary")?;
    let defect = u.unitarity_defect()?;
    if defect > tol.unitarity {
        return Err(Error::UnitarityViolation {
            defect,
            tol: tol.unitarity,
        });
    }

    // A deflation threshold at machine epsilon stalls on near-scalar
    // unitaries such as X X*. The residual check below guards accuracy.
    let m = u.to_nalgebra();
    let schur = [1e-14, 1e-12]
        .iter()
        .find_map(|&eps| nalgebra::Schur::try_new(m.clone(), eps, MAX_SWEEPS * n))
        .ok_or_else(|| Error::NumericalFailure("complex Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    if let Some(bad) = values.iter().find(|z| (z.norm() - 1.0).abs() > 1e-9) {
        return Err(Error::NumericalFailure(format!(
            "unitary eigenvalue {bad} is off the unit circle"
        )));
    }
    let sys = EigenSystem {
        values,
        vectors: ComplexMatrix::from_nalgebra(&q)?,
    };
    sys.check_residual(u, tol, "eig_unitary")?;
    Ok(sys)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in descending
/// order with zero imaginary parts.
pub fn eig_hermitian(h: &ComplexMatrix, tol: &Tolerances) -> Result<EigenSystem> {
    let n = h.require_square("eig_hermitian")?;
    let defect = h.hermiticity_defect()?;
    if defect > tol.hermiticity {
        return Err(Error::HermiticityViolation {
            defect,
            tol: tol.hermiticity,
        });
    }

    // Decompose the exact Hermitian part; the residual is still measured
    // against the caller's matrix.
    let sym = h.add(&adjoint(h))?.scale(C64::new(0.5, 0.0));
    let eig = nalgebra::SymmetricEigen::try_new(sym.to_nalgebra(), f64::EPSILON, MAX_SWEEPS * n)
        .ok_or_else(|| Error::NumericalFailure("Hermitian eigen iteration did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| C64::new(eig.eigenvalues[i], 0.0)).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let sys = EigenSystem { values, vectors };
    sys.check_residual(h, tol, "eig_hermitian")?;
    Ok(sys)
}

/// Descending real eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    Ok(eig_hermitian(h, tol)?.real_values())
}

fn reassemble(vectors: &ComplexMatrix, diag: &[C64]) -> Result<ComplexMatrix> {
    matmul(
        &matmul(vectors, &ComplexMatrix::from_diagonal(diag))?,
        &adjoint(vectors),
    )
}

/// `exp(iH)` for Hermitian `H`, assembled as `V diag(e^{iλ}) V*`.
pub fn exp_i_hermitian(h: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let sys = eig_hermitian(h, tol)?;
    let phases: Vec<C64> = sys.values.iter().map(|l| C64::from_polar(1.0, l.re)).collect();
    reassemble(&sys.vectors, &phases)
}

/// Principal logarithm: the Hermitian `A` with spectrum in `(-π, π]` such
/// that `exp(iA) = U`.
pub fn log_unitary(u: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let sys = eig_unitary(u, tol)?;
    let args: Vec<C64> = sys
        .values
        .iter()
        .map(|&z| C64::new(principal_arg(z, tol.branch), 0.0))
        .collect();
    let a = reassemble(&sys.vectors, &args)?;
    // V diag V* is Hermitian up to rounding; return the exact Hermitian part
    Ok(a.add(&adjoint(&a))?.scale(C64::new(0.5, 0.0)))
}
