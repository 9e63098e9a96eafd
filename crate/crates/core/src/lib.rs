//! Metrics and pseudo-metrics on the unitary group `U(n)` induced by
//! symmetric norms on `R^n`, together with randomized checkers for the
//! eigenphase inequalities that accompany them.
//!
//! The distance between two unitaries `X` and `Y` is computed from the
//! principal arguments `a_j ∈ (-π, π]` of the eigenvalues of `X Y*`:
//!
//! * [`metrics::metric`] evaluates `g(|a_1|, …, |a_n|)` for a symmetric norm `g`;
//! * [`metrics::pseudo_metric`] minimizes the same quantity over a global
//!   phase `e^{ir}`, which makes it blind to global phases.
//!
//! The [`inequalities`] module turns the accompanying eigenvalue
//! inequalities (Ky Fan chains, Lidskii-type bounds for unitary products and
//! Hermitian sums, a perturbation bound) into deterministic, seeded property
//! suites that report their worst observed margin.

pub mod error;
pub mod inequalities;
pub mod linalg;
pub mod majorization;
pub mod metrics;
pub mod norms;
pub mod tolerance;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenSystem};
pub use metrics::{AbsPhaseVector, PhaseMinimum, PhaseVector};
pub use norms::{NormKind, SymmetricNorm, SymmetricNormSpec};
pub use tolerance::Tolerances;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
