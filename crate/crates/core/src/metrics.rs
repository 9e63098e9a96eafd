//! Eigenphase extraction and the norm-induced metric and pseudo-metric on
//! `U(n)`.
//!
//! For unitaries `X`, `Y` let `e^{i a_j}` be the eigenvalues of `X Y*` with
//! `a_j ∈ (-π, π]`. Given a symmetric norm `g`:
//!
//! * `metric(g, X, Y) = g(|a_1|, …, |a_n|)`;
//! * `pseudo_metric(g, X, Y) = min_r g(|wrap(a_1 + r)|, …, |wrap(a_n + r)|)`,
//!   the same quantity optimized over a global phase `e^{ir}`.
//!
//! # Phase minimization
//!
//! `F(r) = g(|wrap(a_j + r)|)` is continuous and `2π`-periodic. The wrap
//! of entry `j` jumps only at `r ≡ π - a_j (mod 2π)`, so the circle splits
//! into at most `n` arcs. On each arc every `|a_j + r + 2π m_j|` is the
//! absolute value of an affine function, and `g` is convex and monotone on
//! the nonnegative orthant, so `F` is convex there. The solver runs a
//! golden-section search on every arc, evaluates every breakpoint and
//! `r = 0`, and keeps the smallest value.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{adjoint, eig_unitary, matmul, principal_arg, ComplexMatrix};
use crate::norms::SymmetricNorm;
use crate::tolerance::Tolerances;

const TWO_PI: f64 = 2.0 * PI;

/// Width below which the per-arc golden-section search stops.
pub const SEGMENT_TOL: f64 = 1e-12;

/// Principal eigenphases, sorted descending in `(-π, π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseVector(Vec<f64>);

impl PhaseVector {
    /// Sorts `phases` descending; every entry must already be in `(-π, π]`.
    pub fn new(mut phases: Vec<f64>) -> Result<Self> {
        if let Some(bad) = phases.iter().find(|&&a| !(a > -PI && a <= PI)) {
            return Err(Error::InvalidArgument(format!("phase {bad} outside (-pi, pi]")));
        }
        phases.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(phases))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn abs(&self) -> AbsPhaseVector {
        AbsPhaseVector::from_phases(&self.0)
    }
}

/// Absolute eigenphases `|a_j|`, sorted descending in `[0, π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbsPhaseVector(Vec<f64>);

impl AbsPhaseVector {
    fn from_phases(phases: &[f64]) -> Self {
        let mut v: Vec<f64> = phases.iter().map(|a| a.abs()).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        Self(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Result of minimizing over the global phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseMinimum {
    /// A minimizing phase in `[0, 2π)`. Not unique in general.
    pub r_star: f64,
    pub value: f64,
    /// Arcs searched (0 for the grid oracle).
    pub segment_count: usize,
    /// Objective evaluations spent.
    pub evaluations: usize,
}

/// Maps an angle into `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(TWO_PI);
    if y > PI {
        y - TWO_PI
    } else {
        y
    }
}

pub fn eigenphases(u: &ComplexMatrix, tol: &Tolerances) -> Result<PhaseVector> {
    let sys = eig_unitary(u, tol)?;
    PhaseVector::new(sys.values.iter().map(|&z| principal_arg(z, tol.branch)).collect())
}

pub fn abs_phases(u: &ComplexMatrix, tol: &Tolerances) -> Result<AbsPhaseVector> {
    Ok(eigenphases(u, tol)?.abs())
}

/// Eigenphases of `X Y*`, after checking shapes against the norm.
pub fn relative_phases<N>(norm: &N, x: &ComplexMatrix, y: &ComplexMatrix, tol: &Tolerances) -> Result<PhaseVector>
where
    N: SymmetricNorm + ?Sized,
{
    let n = x.require_square("metric")?;
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch {
            op: "metric",
            left: x.shape(),
            right: y.shape(),
        });
    }
    if norm.dim() != n {
        return Err(Error::LengthMismatch {
            expected: norm.dim(),
            got: n,
        });
    }
    eigenphases(&matmul(x, &adjoint(y))?, tol)
}

/// `g(|a_1|, …, |a_n|)` for the eigenphases of `X Y*`.
pub fn metric<N>(norm: &N, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<f64>
where
    N: SymmetricNorm + ?Sized,
{
    metric_with(norm, x, y, &Tolerances::default())
}

pub fn metric_with<N>(norm: &N, x: &ComplexMatrix, y: &ComplexMatrix, tol: &Tolerances) -> Result<f64>
where
    N: SymmetricNorm + ?Sized,
{
    let phases = relative_phases(norm, x, y, tol)?;
    Ok(norm.norm_unchecked(phases.abs().as_slice()))
}

/// Global-phase-optimized distance.
pub fn pseudo_metric<N>(norm: &N, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<PhaseMinimum>
where
    N: SymmetricNorm + ?Sized,
{
    pseudo_metric_with(norm, x, y, &Tolerances::default())
}

pub fn pseudo_metric_with<N>(norm: &N, x: &ComplexMatrix, y: &ComplexMatrix, tol: &Tolerances) -> Result<PhaseMinimum>
where
    N: SymmetricNorm + ?Sized,
{
    let phases = relative_phases(norm, x, y, tol)?;
    Ok(minimize_over_phase(norm, phases.as_slice()))
}

/// `F(r) = g(|wrap(a_j + r)|)`.
pub fn shifted_objective<N>(norm: &N, phases: &[f64], r: f64) -> f64
where
    N: SymmetricNorm + ?Sized,
{
    let shifted: Vec<f64> = phases.iter().map(|a| wrap_phase(a + r).abs()).collect();
    norm.norm_unchecked(&shifted)
}

/// Exact-to-tolerance minimization of [`shifted_objective`] over `r`.
pub fn minimize_over_phase<N>(norm: &N, phases: &[f64]) -> PhaseMinimum
where
    N: SymmetricNorm + ?Sized,
{
    let mut evaluations = 0usize;
    let mut f = |r: f64| {
        evaluations += 1;
        shifted_objective(norm, phases, r)
    };

    // r = 0 first, so the result never exceeds the unoptimized metric
    let mut best = (0.0, f(0.0));

    let mut breaks: Vec<f64> = phases.iter().map(|a| (PI - a).rem_euclid(TWO_PI)).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    for &b in &breaks {
        let v = f(b);
        if v < best.1 {
            best = (b, v);
        }
    }

    let mut segment_count = 0;
    for (i, &lo) in breaks.iter().enumerate() {
        let hi = breaks.get(i + 1).copied().unwrap_or(breaks[0] + TWO_PI);
        if hi <= lo {
            continue;
        }
        segment_count += 1;
        let (r, v) = golden_section(&mut f, lo, hi, SEGMENT_TOL);
        if v < best.1 {
            best = (r, v);
        }
    }

    PhaseMinimum {
        r_star: normalize_angle(best.0),
        value: best.1,
        segment_count,
        evaluations,
    }
}

/// Brute-force minimizer: uniform grid on `[0, 2π)` followed by a
/// golden-section refinement on the two grid cells around the best point.
/// Independent of the arc decomposition used by [`pseudo_metric`]; meant
/// for cross-checking it.
pub fn pseudo_metric_grid_oracle<N>(
    norm: &N,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    grid_points: usize,
) -> Result<PhaseMinimum>
where
    N: SymmetricNorm + ?Sized,
{
    if grid_points < 3 {
        return Err(Error::InvalidArgument(format!(
            "grid oracle needs at least 3 points, got {grid_points}"
        )));
    }
    let phases = relative_phases(norm, x, y, &Tolerances::default())?;
    Ok(grid_minimize(norm, phases.as_slice(), grid_points))
}

pub fn grid_minimize<N>(norm: &N, phases: &[f64], grid_points: usize) -> PhaseMinimum
where
    N: SymmetricNorm + ?Sized,
{
    let step = TWO_PI / grid_points as f64;
    let mut evaluations = 0usize;
    let mut f = |r: f64| {
        evaluations += 1;
        shifted_objective(norm, phases, r)
    };

    let mut best = (0.0, f(0.0));
    for i in 1..grid_points {
        let r = i as f64 * step;
        let v = f(r);
        if v < best.1 {
            best = (r, v);
        }
    }
    let (r, v) = golden_section(&mut f, best.0 - step, best.0 + step, SEGMENT_TOL);
    if v < best.1 {
        best = (r, v);
    }
    PhaseMinimum {
        r_star: normalize_angle(best.0),
        value: best.1,
        segment_count: 0,
        evaluations,
    }
}

/// Evolution cost `f(X) = pseudo_metric(g, X, I)`.
pub fn cost<N>(norm: &N, x: &ComplexMatrix) -> Result<f64>
where
    N: SymmetricNorm + ?Sized,
{
    cost_with(norm, x, &Tolerances::default())
}

pub fn cost_with<N>(norm: &N, x: &ComplexMatrix, tol: &Tolerances) -> Result<f64>
where
    N: SymmetricNorm + ?Sized,
{
    let n = x.require_square("cost")?;
    Ok(pseudo_metric_with(norm, x, &ComplexMatrix::identity(n), tol)?.value)
}

fn normalize_angle(r: f64) -> f64 {
    let r = r.rem_euclid(TWO_PI);
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Golden-section search for the minimum of `f` on `[a, b]`, run until the
/// bracket is narrower than `tol`. Returns `(x_min, f_min)`.
pub(crate) fn golden_section(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        // the bracket stops shrinking once it reaches floating-point resolution
        if x1 >= x2 {
            break;
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use crate::norms::SymmetricNormSpec;
    use crate::C64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn builtin_specs(n: usize) -> Vec<SymmetricNormSpec> {
        let mut v = vec![
            SymmetricNormSpec::lp(1.0, n).unwrap(),
            SymmetricNormSpec::lp(2.0, n).unwrap(),
            SymmetricNormSpec::linf(n).unwrap(),
            SymmetricNormSpec::mu((0..n).map(|i| 0.5 + i as f64).collect()).unwrap(),
        ];
        if n >= 2 {
            v.push(SymmetricNormSpec::ky_fan(2, n).unwrap());
        }
        v
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_phase(-3.0 * PI / 2.0) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn eigenphases_examples() {
        assert_eq!(
            eigenphases(&ComplexMatrix::identity(3), &tol()).unwrap().as_slice(),
            &[0.0; 3]
        );
        let minus = ComplexMatrix::identity(2).scale(C64::new(-1.0, 0.0));
        assert_eq!(eigenphases(&minus, &tol()).unwrap().as_slice(), &[PI, PI]);
        let d = ComplexMatrix::phase_diagonal(&[0.3, -2.9, 2.9]);
        let got = eigenphases(&d, &tol()).unwrap();
        for (g, e) in got.as_slice().iter().zip([2.9, 0.3, -2.9]) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn abs_phases_examples() {
        let got = abs_phases(&ComplexMatrix::phase_diagonal(&[0.3, -2.9]), &tol()).unwrap();
        assert!((got.as_slice()[0] - 2.9).abs() < 1e-12);
        assert!((got.as_slice()[1] - 0.3).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=6 {
            let u = haar_unitary(n, &mut rng);
            let a = abs_phases(&u, &tol()).unwrap();
            let b = abs_phases(&adjoint(&u), &tol()).unwrap();
            for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn phase_vector_rejects_out_of_range() {
        assert!(PhaseVector::new(vec![-PI]).is_err());
        assert!(PhaseVector::new(vec![3.5]).is_err());
    }

    #[test]
    fn metric_of_equal_arguments_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=5 {
            let x = haar_unitary(n, &mut rng);
            for spec in builtin_specs(n) {
                assert!(metric(&spec, &x, &x).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn linf_single_phase() {
        let linf = SymmetricNormSpec::linf(2).unwrap();
        for theta in [0.1, 1.0, 2.5, PI] {
            let x = ComplexMatrix::phase_diagonal(&[0.0, theta]);
            let d = metric(&linf, &x, &ComplexMatrix::identity(2)).unwrap();
            assert!((d - theta).abs() < 1e-12, "{theta}: {d}");
        }
    }

    #[test]
    fn l1_metric_matches_raw_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let l1 = SymmetricNormSpec::lp(1.0, 4).unwrap();
        for _ in 0..20 {
            let x = haar_unitary(4, &mut rng);
            let y = haar_unitary(4, &mut rng);
            let raw = eig_unitary(&matmul(&x, &adjoint(&y)).unwrap(), &tol()).unwrap();
            let direct: f64 = raw.values.iter().map(|z| z.im.atan2(z.re).abs()).sum();
            assert!((metric(&l1, &x, &y).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn metric_shape_errors() {
        let l1 = SymmetricNormSpec::lp(1.0, 2).unwrap();
        let i2 = ComplexMatrix::identity(2);
        let i3 = ComplexMatrix::identity(3);
        assert!(matches!(metric(&l1, &i2, &i3), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(metric(&l1, &i3, &i3), Err(Error::LengthMismatch { .. })));
        let bad = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        assert!(matches!(metric(&l1, &bad, &i2), Err(Error::UnitarityViolation { .. })));
    }

    #[test]
    fn pseudo_metric_ignores_global_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=5 {
            let x = haar_unitary(n, &mut rng);
            for s in [0.3, -2.0, PI] {
                let y = x.scale(C64::from_polar(1.0, s));
                for spec in builtin_specs(n) {
                    assert!(pseudo_metric(&spec, &x, &y).unwrap().value < 1e-10);
                }
            }
        }
    }

    #[test]
    fn pseudo_metric_single_phase_values() {
        let l1 = SymmetricNormSpec::lp(1.0, 2).unwrap();
        let linf = SymmetricNormSpec::linf(2).unwrap();
        let id = ComplexMatrix::identity(2);
        for theta in [0.1, 1.0, 3.0] {
            let x = ComplexMatrix::phase_diagonal(&[0.0, theta]);
            let a = pseudo_metric(&l1, &x, &id).unwrap();
            let b = pseudo_metric(&linf, &x, &id).unwrap();
            assert!((a.value - theta).abs() < 1e-9);
            assert!((b.value - theta / 2.0).abs() < 1e-9);
            assert!((shifted_objective(&linf, &[theta, 0.0], b.r_star) - b.value).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_minimum_value_replays() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=6 {
            let x = haar_unitary(n, &mut rng);
            let y = haar_unitary(n, &mut rng);
            for spec in builtin_specs(n) {
                let m = pseudo_metric(&spec, &x, &y).unwrap();
                assert!(m.r_star >= 0.0 && m.r_star < TWO_PI);
                assert!(m.segment_count >= 1 && m.segment_count <= n);
                let shifted = x.scale(C64::from_polar(1.0, m.r_star));
                let again = metric(&spec, &shifted, &y).unwrap();
                assert!((again - m.value).abs() < 1e-12, "{spec}: {again} vs {}", m.value);
                assert!(m.value <= metric(&spec, &x, &y).unwrap());
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = haar_unitary(3, &mut rng);
        let y = haar_unitary(3, &mut rng);
        let l2 = SymmetricNormSpec::lp(2.0, 3).unwrap();
        assert!(pseudo_metric_grid_oracle(&l2, &x, &x, 1000).unwrap().value < 1e-10);
        let coarse = pseudo_metric_grid_oracle(&l2, &x, &y, 1_000).unwrap().value;
        let fine = pseudo_metric_grid_oracle(&l2, &x, &y, 100_000).unwrap().value;
        assert!(fine <= coarse + 1e-12);
        assert!(pseudo_metric_grid_oracle(&l2, &x, &y, 2).is_err());
    }

    #[test]
    fn cost_identity_and_invariances() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 1..=5 {
            for spec in builtin_specs(n) {
                assert!(cost(&spec, &ComplexMatrix::identity(n)).unwrap() < 1e-12);
                let x = haar_unitary(n, &mut rng);
                let c = cost(&spec, &x).unwrap();
                let phased = cost(&spec, &x.scale(C64::from_polar(1.0, 1.234))).unwrap();
                let inverse = cost(&spec, &adjoint(&x)).unwrap();
                assert!((c - phased).abs() < 1e-8);
                assert!((c - inverse).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn golden_section_on_parabola() {
        let mut f = |x: f64| (x - 0.3) * (x - 0.3) + 1.0;
        let (x, v) = golden_section(&mut f, -2.0, 5.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
    }
}
