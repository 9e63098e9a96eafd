//! Numerical tolerances shared by the eigensolvers and the phase pipeline.

use serde::{Deserialize, Serialize};

/// Every numerical threshold used by [`crate::linalg`] and
/// [`crate::metrics`], collected in one place so a caller can tighten or
/// loosen them uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Maximum `||U U* - I||_F` accepted as unitary.
    pub unitarity: f64,
    /// Maximum `||H - H*||_F` accepted as Hermitian.
    pub hermiticity: f64,
    /// Decompositions must satisfy `||M V - V Λ||_F <= residual_factor * n * ||M||_F`.
    pub residual_factor: f64,
    /// Eigenphases within this distance of `-π` are snapped to `+π`.
    pub branch: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: 1e-8,
            hermiticity: 1e-8,
            residual_factor: 1e-10,
            branch: 1e-12,
        }
    }
}

impl Tolerances {
    /// Residual bound for an `n x n` matrix of Frobenius norm `fro`.
    pub fn residual_bound(&self, n: usize, fro: f64) -> f64 {
        // an all-zero matrix still gets an absolute floor
        self.residual_factor * n as f64 * fro.max(f64::MIN_POSITIVE)
    }
}
