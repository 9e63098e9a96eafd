//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs the release-scale suite grids through the `umetrics` binary and
//! the solver and sampler checks through the library.

use std::process::{Command, ExitCode, Output};
use std::time::Instant;

use serde_json::Value;
use umetrics::inequalities::trial_rng;
use umetrics::linalg::{eig_hermitian, eig_unitary, gue_hermitian, haar_unitary};
use umetrics::metrics::{pseudo_metric, pseudo_metric_grid_oracle};
use umetrics::norms::{validate_symmetric_norm, NormProperty};
use umetrics::{ComplexMatrix, SymmetricNorm, SymmetricNormSpec, Tolerances};

const DIMS: &str = "2,3,4,5,6";
const SEED: &str = "2024";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn umetrics(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umetrics"))
        .env_remove("UMETRICS_SEED")
        .args(args)
        .output()
        .expect("spawn umetrics")
}

fn reports(o: &Output) -> Result<Vec<Value>, String> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).map_err(|e| format!("bad report line: {e}")))
        .collect()
}

/// Runs a `check` and requires exit 0, the expected number of reports, the
/// requested trial count and zero violations in every report.
fn clean_check(args: &[&str], expected_reports: usize, trials: u64) -> Outcome {
    clean_output(&umetrics(args), expected_reports, trials)
}

fn clean_output(o: &Output, expected_reports: usize, trials: u64) -> Outcome {
    let rs = reports(o)?;
    if o.status.code() != Some(0) {
        return Err(format!(
            "exit {:?}: {}",
            o.status.code(),
            String::from_utf8_lossy(&o.stderr).trim()
        ));
    }
    if rs.len() != expected_reports {
        return Err(format!("{} reports, expected {expected_reports}", rs.len()));
    }
    let mut worst = f64::INFINITY;
    for r in &rs {
        let v = r["violations"].as_u64().unwrap_or(u64::MAX);
        if v != 0 {
            return Err(format!("{} {}: {v} violations", r["suite"], r["params"]));
        }
        if r["trials"].as_u64() != Some(trials) && !r["suite"].as_str().unwrap_or("").ends_with("isotonicity") {
            return Err(format!("{} ran {} trials", r["suite"], r["trials"]));
        }
        worst = worst.min(r["worst_margin"].as_f64().unwrap_or(f64::NAN));
    }
    Ok(format!("{} runs, 0 violations, worst margin {worst:.2e}", rs.len()))
}

fn c1_metric_axioms() -> Outcome {
    // 5 dims × {l1, l2, linf, kyfan:2, mu:random}
    clean_check(
        &[
            "check",
            "metric-axioms",
            "--dims",
            DIMS,
            "--trials",
            "1000",
            "--seed",
            SEED,
            "--tol-metric-axioms",
            "1e-8",
        ],
        25,
        1000,
    )
}

fn c2_pseudo_metric_axioms() -> Outcome {
    clean_check(
        &[
            "check",
            "pseudo-metric-axioms",
            "--dims",
            DIMS,
            "--trials",
            "500",
            "--seed",
            SEED,
            "--tol-pseudo-metric-axioms",
            "1e-6",
        ],
        25,
        500,
    )
}

fn c3_solver_vs_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..500usize {
        let mut rng = trial_rng(3, i);
        let n = 1 + i % 6;
        let norm = match i % 5 {
            0 => SymmetricNormSpec::lp(1.0, n),
            1 => SymmetricNormSpec::lp(2.0, n),
            2 => SymmetricNormSpec::linf(n),
            3 => SymmetricNormSpec::ky_fan(1 + i % n, n),
            _ => SymmetricNormSpec::random_mu(n, &mut rng),
        }
        .map_err(|e| e.to_string())?;
        let x = haar_unitary(n, &mut rng);
        let y = haar_unitary(n, &mut rng);
        let fast = pseudo_metric(&norm, &x, &y).map_err(|e| e.to_string())?;
        let grid = pseudo_metric_grid_oracle(&norm, &x, &y, 100_000).map_err(|e| e.to_string())?;
        let gap = (fast.value - grid.value).abs();
        worst = worst.max(gap);
        if gap > 1e-6 {
            return Err(format!(
                "instance {i} ({norm}, n={n}): solver {} vs oracle {}",
                fast.value, grid.value
            ));
        }
    }
    let id = ComplexMatrix::identity(2);
    for theta in [0.1, 1.0, 3.0] {
        let x = ComplexMatrix::phase_diagonal(&[0.0, theta]);
        for (norm, want) in [
            (SymmetricNormSpec::lp(1.0, 2).unwrap(), theta),
            (SymmetricNormSpec::linf(2).unwrap(), theta / 2.0),
        ] {
            let got = pseudo_metric(&norm, &x, &id).map_err(|e| e.to_string())?.value;
            if (got - want).abs() > 1e-6 {
                return Err(format!("{norm} at theta = {theta}: {got}, expected {want}"));
            }
        }
    }
    Ok(format!(
        "500 instances, max |solver - oracle| = {worst:.2e}; analytic two-level cases exact"
    ))
}

fn c4_kyfan_chain() -> Outcome {
    clean_check(
        &[
            "check",
            "kyfan-chain",
            "--dims",
            DIMS,
            "--trials",
            "1000",
            "--seed",
            SEED,
            "--tol-kyfan-chain",
            "1e-9",
        ],
        5,
        1000,
    )
}

fn c5_unitary_lidskii() -> Outcome {
    clean_check(
        &[
            "check",
            "unitary-lidskii",
            "--dims",
            DIMS,
            "--trials",
            "1000",
            "--seed",
            SEED,
            "--tol-unitary-lidskii",
            "1e-9",
        ],
        5,
        1000,
    )
}

fn c6_hermitian_lidskii() -> Outcome {
    // the trace identity is one of the checks, with margin -|defect| / n
    clean_check(
        &[
            "check",
            "hermitian-lidskii",
            "--dims",
            DIMS,
            "--trials",
            "1000",
            "--seed",
            SEED,
            "--tol-hermitian-lidskii",
            "1e-9",
        ],
        5,
        1000,
    )
}

fn c7_schur_transfer() -> Outcome {
    let o = umetrics(&[
        "check",
        "schur-transfer",
        "--dims",
        "1,2,3,4,5,6",
        "--trials",
        "500",
        "--iso-trials",
        "1000",
        "--seed",
        SEED,
    ]);
    let rs = reports(&o)?;
    let iso = rs.iter().filter(|r| r["suite"] == "schur-transfer/isotonicity").count();
    if iso == 0 || rs.len() != 3 * iso {
        return Err(format!("{} reports for {iso} functionals", rs.len()));
    }
    if rs
        .iter()
        .any(|r| r["suite"] == "schur-transfer/isotonicity" && r["trials"] != 1000)
    {
        return Err("isotonicity stage did not run 1000 pairs".into());
    }
    let summary = clean_output(&o, rs.len(), 500)?;
    Ok(format!("{iso} functionals, {summary}"))
}

fn c8_perturbation() -> Outcome {
    clean_check(
        &[
            "check",
            "perturbation",
            "--dims",
            DIMS,
            "--eps",
            "0.01,0.1,0.5",
            "--trials",
            "1000",
            "--seed",
            SEED,
            "--tol-perturbation",
            "1e-9",
        ],
        15,
        1000,
    )
}

fn c9_cost_constraints() -> Outcome {
    clean_check(
        &[
            "check",
            "cost-constraints",
            "--dims",
            DIMS,
            "--trials",
            "500",
            "--seed",
            SEED,
            "--tol-cost-constraints",
            "1e-8",
        ],
        25,
        500,
    )
}

/// Sum of entries: not even nonnegative, so not a norm.
struct SignedSum(usize);

impl SymmetricNorm for SignedSum {
    fn dim(&self) -> usize {
        self.0
    }

    fn norm_unchecked(&self, v: &[f64]) -> f64 {
        v.iter().sum()
    }
}

fn c10_negative_controls() -> Outcome {
    let o = umetrics(&[
        "check",
        "general-lidskii",
        "--sets",
        r#"{"I":[2],"J":[2],"K":[2]}"#,
        "--dims",
        "2",
        "--seed",
        SEED,
    ]);
    let rs = reports(&o)?;
    let violations = rs.first().and_then(|r| r["violations"].as_u64()).unwrap_or(0);
    if o.status.code() != Some(1) || violations == 0 {
        return Err(format!(
            "general-lidskii exit {:?} with {violations} violations",
            o.status.code()
        ));
    }
    let report = validate_symmetric_norm(&SignedSum(4), &mut trial_rng(10, 0), 1000, 1e-10);
    if report.passed() || !report.has(NormProperty::Positivity) {
        return Err("broken-norm fixture passed validation".into());
    }
    Ok(format!(
        "general-lidskii: {violations} violations, exit 1; broken norm: {} violations",
        report.violations.len()
    ))
}

fn c11_numerical_substrate() -> Outcome {
    let tol = Tolerances::default();
    let mut worst_ratio: f64 = 0.0;
    for n in 1..=8 {
        for t in 0..200 {
            let mut rng = trial_rng(11, n * 1000 + t);
            let u = haar_unitary(n, &mut rng);
            let h = gue_hermitian(n, 1.0, &mut rng);
            let su = eig_unitary(&u, &tol).map_err(|e| e.to_string())?;
            let sh = eig_hermitian(&h, &tol).map_err(|e| e.to_string())?;
            for (m, sys) in [(&u, &su), (&h, &sh)] {
                let bound = 1e-10 * n as f64 * m.frobenius_norm();
                let r = sys.residual(m).map_err(|e| e.to_string())?;
                worst_ratio = worst_ratio.max(r / bound);
                if r > bound {
                    return Err(format!("residual {r:e} above {bound:e} at n = {n}"));
                }
            }
        }
    }

    let samples = 10_000;
    let mean = (0..samples)
        .map(|i| haar_unitary(2, &mut trial_rng(42, i)).trace().norm_sqr())
        .sum::<f64>()
        / samples as f64;
    if (mean - 1.0).abs() > 0.05 {
        return Err(format!("E|tr U|^2 = {mean}"));
    }

    let args = ["check", "all", "--seed", "42"];
    let first = umetrics(&args);
    let second = umetrics(&args);
    let serial = umetrics(&[&args[..], &["--threads", "1"]].concat());
    if first.status.code() != Some(0) {
        return Err(format!("check all exit {:?}", first.status.code()));
    }
    if first.stdout != second.stdout || first.stdout != serial.stdout {
        return Err("check all --seed 42 output differs between runs".into());
    }
    Ok(format!(
        "max residual / bound = {worst_ratio:.2e}; E|tr U|^2 = {mean:.4}; check all byte-identical ({} bytes)",
        first.stdout.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("metric axioms", c1_metric_axioms),
        ("pseudo-metric axioms", c2_pseudo_metric_axioms),
        ("phase solver vs grid oracle", c3_solver_vs_oracle),
        ("Ky Fan chain", c4_kyfan_chain),
        ("unitary Lidskii", c5_unitary_lidskii),
        ("Hermitian Lidskii and trace", c6_hermitian_lidskii),
        ("Schur-convex transfer", c7_schur_transfer),
        ("perturbation bound", c8_perturbation),
        ("cost-function constraints", c9_cost_constraints),
        ("negative controls", c10_negative_controls),
        ("numerical substrate", c11_numerical_substrate),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
