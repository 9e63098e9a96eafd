//! Property tests for the metrics, norms and majorization layers.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use umetrics::linalg::{adjoint, exp_i_hermitian, haar_unitary, log_unitary, matmul};
use umetrics::majorization::weakly_submajorized;
use umetrics::metrics::{grid_minimize, metric, minimize_over_phase, pseudo_metric, wrap_phase};
use umetrics::norms::ky_fan_vector;
use umetrics::{ComplexMatrix, SymmetricNorm, SymmetricNormSpec, Tolerances, C64};

fn norms(n: usize, mu: &[f64]) -> Vec<SymmetricNormSpec> {
    let mut v = vec![
        SymmetricNormSpec::lp(1.0, n).unwrap(),
        SymmetricNormSpec::lp(2.0, n).unwrap(),
        SymmetricNormSpec::lp(3.5, n).unwrap(),
        SymmetricNormSpec::linf(n).unwrap(),
        SymmetricNormSpec::mu(mu[..n].to_vec()).unwrap(),
    ];
    v.extend((1..=n).map(|k| SymmetricNormSpec::ky_fan(k, n).unwrap()));
    v
}

fn unitaries(seed: u64, n: usize, count: usize) -> Vec<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| haar_unitary(n, &mut rng)).collect()
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_is_symmetric_invariant_and_triangular(
        seed in any::<u64>(),
        n in 1usize..=5,
        mu in prop::collection::vec(0.05f64..2.0, 5),
    ) {
        let u = unitaries(seed, n, 4);
        let (x, y, z, w) = (&u[0], &u[1], &u[2], &u[3]);
        for g in norms(n, &mu) {
            let dxy = metric(&g, x, y).unwrap();
            prop_assert!(dxy >= 0.0);
            prop_assert!((dxy - metric(&g, y, x).unwrap()).abs() < 1e-9);
            let right = metric(&g, &matmul(x, w).unwrap(), &matmul(y, w).unwrap()).unwrap();
            let left = metric(&g, &matmul(w, x).unwrap(), &matmul(w, y).unwrap()).unwrap();
            prop_assert!((right - dxy).abs() < 1e-8);
            prop_assert!((left - dxy).abs() < 1e-8);
            let tri = metric(&g, x, y).unwrap() + metric(&g, y, z).unwrap() - metric(&g, x, z).unwrap();
            prop_assert!(tri >= -1e-8, "{g}: triangle margin {tri}");
        }
    }

    #[test]
    fn pseudo_metric_is_phase_invariant_and_below_metric(
        seed in any::<u64>(),
        n in 1usize..=5,
        s in -3.0f64..3.0,
        mu in prop::collection::vec(0.05f64..2.0, 5),
    ) {
        let u = unitaries(seed, n, 2);
        let (x, y) = (&u[0], &u[1]);
        let xs = x.scale(C64::from_polar(1.0, s));
        for g in norms(n, &mu) {
            let d = pseudo_metric(&g, x, y).unwrap().value;
            prop_assert!(d <= metric(&g, x, y).unwrap() + 1e-12);
            prop_assert!((pseudo_metric(&g, &xs, y).unwrap().value - d).abs() < 1e-6);
            prop_assert!((pseudo_metric(&g, y, x).unwrap().value - d).abs() < 1e-6);
        }
    }

    #[test]
    fn phase_solver_matches_grid(
        phases in prop::collection::vec(-3.1f64..3.1, 1..=6),
        mu in prop::collection::vec(0.05f64..2.0, 6),
    ) {
        let n = phases.len();
        for g in norms(n, &mu) {
            let fast = minimize_over_phase(&g, &phases);
            let grid = grid_minimize(&g, &phases, 20_000);
            prop_assert!(fast.value <= grid.value + 1e-9, "{g}: {} > {}", fast.value, grid.value);
            prop_assert!(grid.value - fast.value < 1e-6, "{g}: {} vs {}", fast.value, grid.value);
        }
    }

    #[test]
    fn ky_fan_dominance_orders_every_norm(
        u in prop::collection::vec(0.0f64..5.0, 1..=6),
        bump in prop::collection::vec(0.0f64..2.0, 6),
        mu in prop::collection::vec(0.05f64..2.0, 6),
    ) {
        let n = u.len();
        let u = sorted_desc(u);
        let v = sorted_desc(u.iter().zip(&bump).map(|(a, b)| a + b).collect());
        for k in 1..=n {
            prop_assert!(ky_fan_vector(&u, k).unwrap() <= ky_fan_vector(&v, k).unwrap() + 1e-12);
        }
        for g in norms(n, &mu) {
            prop_assert!(g.evaluate(&u).unwrap() <= g.evaluate(&v).unwrap() + 1e-12);
        }
    }

    #[test]
    fn weak_majorization_orders_every_norm(
        v in prop::collection::vec(0.0f64..5.0, 2..=6),
        t in 0.0f64..1.0,
        shrink in 0.0f64..1.0,
        mu in prop::collection::vec(0.05f64..2.0, 6),
    ) {
        // a T-transform followed by shrinking gives u ≺_w v
        let n = v.len();
        let mut u = v.clone();
        let (a, b) = (u[0], u[n - 1]);
        u[0] = t * a + (1.0 - t) * b;
        u[n - 1] = (1.0 - t) * a + t * b;
        let u: Vec<f64> = u.iter().map(|x| x * shrink).collect();
        prop_assert!(weakly_submajorized(&u, &v, 1e-12).unwrap().holds);
        for g in norms(n, &mu) {
            prop_assert!(g.evaluate(&u).unwrap() <= g.evaluate(&v).unwrap() + 1e-10);
        }
    }

    #[test]
    fn norms_are_monotone_in_absolute_entries(
        v in prop::collection::vec(-5.0f64..5.0, 1..=6),
        scale in prop::collection::vec(0.0f64..1.0, 6),
        mu in prop::collection::vec(0.05f64..2.0, 6),
    ) {
        let n = v.len();
        let smaller: Vec<f64> = v.iter().zip(&scale).map(|(x, s)| -x * s).collect();
        for g in norms(n, &mu) {
            prop_assert!(g.evaluate(&smaller).unwrap() <= g.evaluate(&v).unwrap() + 1e-12);
        }
    }

    #[test]
    fn wrap_phase_lands_in_principal_range(x in -1e3f64..1e3) {
        let w = wrap_phase(x);
        prop_assert!(w > -std::f64::consts::PI && w <= std::f64::consts::PI);
        let turns = (x - w) / (2.0 * std::f64::consts::PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn log_then_exp_recovers_unitary(seed in any::<u64>(), n in 1usize..=6) {
        let tol = Tolerances::default();
        let u = &unitaries(seed, n, 1)[0];
        let h = log_unitary(u, &tol).unwrap();
        prop_assert!(h.hermiticity_defect().unwrap() < 1e-12);
        let back = exp_i_hermitian(&h, &tol).unwrap();
        prop_assert!(back.sub(u).unwrap().frobenius_norm() < 1e-10);
        let prod = matmul(u, &adjoint(&back)).unwrap();
        prop_assert!(prod.sub(&ComplexMatrix::identity(n)).unwrap().frobenius_norm() < 1e-10);
    }
}
