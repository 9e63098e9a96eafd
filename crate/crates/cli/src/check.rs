//! `check` subcommand: expands a run configuration into suite runs.

use clap::ValueEnum;
use umetrics::inequalities::{
    self as ineq, trial_rng, SuiteConfig, TransferFunctional, TrialReport, EXACT_TOL, METRIC_TOL, SOLVER_TOL,
};
use umetrics::majorization::GeneralIndexSets;
use umetrics::{Error, SymmetricNormSpec};

pub const MAX_DIM: usize = 64;
pub const RANDOM_MU: &str = "mu:random";
pub const DEFAULT_NORMS: [&str; 5] = ["l1", "l2", "linf", "kyfan:2", RANDOM_MU];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    MetricAxioms,
    PseudoMetricAxioms,
    KyfanChain,
    UnitaryLidskii,
    HermitianLidskii,
    SchurTransfer,
    Perturbation,
    GeneralLidskii,
    CostConstraints,
    All,
}

impl SuiteName {
    const SUITES: [SuiteName; 9] = [
        SuiteName::MetricAxioms,
        SuiteName::PseudoMetricAxioms,
        SuiteName::KyfanChain,
        SuiteName::UnitaryLidskii,
        SuiteName::HermitianLidskii,
        SuiteName::SchurTransfer,
        SuiteName::Perturbation,
        SuiteName::CostConstraints,
        SuiteName::GeneralLidskii,
    ];

    fn default_tol(self) -> f64 {
        match self {
            SuiteName::MetricAxioms | SuiteName::CostConstraints => METRIC_TOL,
            SuiteName::PseudoMetricAxioms => SOLVER_TOL,
            _ => EXACT_TOL,
        }
    }
}

/// Absolute per-suite slacks; each wins over `--tol` scaling.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct TolOverrides {
    #[arg(long, global = true)]
    pub tol_metric_axioms: Option<f64>,
    #[arg(long, global = true)]
    pub tol_pseudo_metric_axioms: Option<f64>,
    #[arg(long, global = true)]
    pub tol_kyfan_chain: Option<f64>,
    #[arg(long, global = true)]
    pub tol_unitary_lidskii: Option<f64>,
    #[arg(long, global = true)]
    pub tol_hermitian_lidskii: Option<f64>,
    #[arg(long, global = true)]
    pub tol_schur_transfer: Option<f64>,
    #[arg(long, global = true)]
    pub tol_perturbation: Option<f64>,
    #[arg(long, global = true)]
    pub tol_general_lidskii: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cost_constraints: Option<f64>,
}

impl TolOverrides {
    fn get(&self, suite: SuiteName) -> Option<f64> {
        match suite {
            SuiteName::MetricAxioms => self.tol_metric_axioms,
            SuiteName::PseudoMetricAxioms => self.tol_pseudo_metric_axioms,
            SuiteName::KyfanChain => self.tol_kyfan_chain,
            SuiteName::UnitaryLidskii => self.tol_unitary_lidskii,
            SuiteName::HermitianLidskii => self.tol_hermitian_lidskii,
            SuiteName::SchurTransfer => self.tol_schur_transfer,
            SuiteName::Perturbation => self.tol_perturbation,
            SuiteName::GeneralLidskii => self.tol_general_lidskii,
            SuiteName::CostConstraints => self.tol_cost_constraints,
            SuiteName::All => None,
        }
    }

    fn all(&self) -> impl Iterator<Item = f64> + '_ {
        SuiteName::SUITES.iter().filter_map(|&s| self.get(s))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub norm_specs: Vec<String>,
    pub tol_scale: f64,
    pub tol_overrides: TolOverrides,
    pub p: Option<usize>,
    pub eps: Vec<f64>,
    pub sets: Option<String>,
    pub iso_trials: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.dims.is_empty() {
            return Err("--dims must not be empty".into());
        }
        if let Some(d) = self.dims.iter().find(|&&d| d == 0 || d > MAX_DIM) {
            return Err(format!("dimension {d} outside 1..={MAX_DIM}"));
        }
        if self.trials == 0 || self.iso_trials == 0 {
            return Err("trial counts must be >= 1".into());
        }
        if !(self.tol_scale.is_finite() && self.tol_scale > 0.0) {
            return Err("--tol must be positive and finite".into());
        }
        if self.tol_overrides.all().any(|t| !(t.is_finite() && t >= 0.0)) {
            return Err("--tol-<suite> values must be nonnegative and finite".into());
        }
        if self.p == Some(0) {
            return Err("--p must be >= 1".into());
        }
        Ok(())
    }

    fn tol(&self, suite: SuiteName) -> f64 {
        self.tol_overrides
            .get(suite)
            .unwrap_or(suite.default_tol() * self.tol_scale)
    }

    fn suite_config(&self, suite: SuiteName) -> SuiteConfig {
        SuiteConfig::new(self.seed, self.trials, self.tol(suite))
    }

    /// Every requested norm that fits dimension `n`. A Ky Fan index above
    /// `n` or an explicit weight list of another length is skipped;
    /// [`RunConfig::check_norms_apply`] rejects specs that fit no dimension.
    fn norms_for(&self, n: usize) -> Result<Vec<SymmetricNormSpec>, CheckError> {
        let mut out = Vec::new();
        for s in &self.norm_specs {
            if s == RANDOM_MU {
                out.push(random_mu(self.seed, n)?);
                continue;
            }
            if let Ok(spec) = SymmetricNormSpec::parse(s, n) {
                out.push(spec);
            }
        }
        Ok(out)
    }

    fn check_norms_apply(&self) -> Result<(), CheckError> {
        for s in &self.norm_specs {
            if s == RANDOM_MU {
                continue;
            }
            let ok = self.dims.iter().any(|&n| SymmetricNormSpec::parse(s, n).is_ok());
            if !ok {
                let reason = SymmetricNormSpec::parse(s, self.dims[0]).unwrap_err();
                return Err(CheckError::Usage(format!(
                    "norm `{s}` fits none of the requested dimensions: {reason}"
                )));
            }
        }
        Ok(())
    }
}

/// Seeded positive `μ` weights for dimension `n`, drawn from a stream no
/// suite trial uses.
pub fn random_mu(seed: u64, n: usize) -> Result<SymmetricNormSpec, Error> {
    SymmetricNormSpec::random_mu(n, &mut trial_rng(seed, usize::MAX - n))
}

#[derive(Debug)]
pub enum CheckError {
    Usage(String),
    /// A transfer functional failed its isotonicity or base stage.
    Premise(String),
    Numerical(Error),
}

impl From<Error> for CheckError {
    fn from(e: Error) -> Self {
        match e {
            Error::TransferPremise(m) => CheckError::Premise(m),
            Error::InvalidArgument(m) | Error::InvalidIndexSet(m) | Error::InvalidNormSpec(m) => CheckError::Usage(m),
            e => CheckError::Numerical(e),
        }
    }
}

/// Runs `suite` (or every suite for `all`) over the configured grid.
pub fn run(suite: SuiteName, cfg: &RunConfig) -> Result<Vec<TrialReport>, CheckError> {
    let suites: Vec<SuiteName> = match suite {
        SuiteName::All => SuiteName::SUITES
            .into_iter()
            .filter(|&s| s != SuiteName::GeneralLidskii || cfg.sets.is_some())
            .collect(),
        s => vec![s],
    };
    if suites.iter().any(|s| uses_norms(*s)) {
        cfg.check_norms_apply()?;
    }
    let mut reports = Vec::new();
    for s in suites {
        run_one(s, cfg, &mut reports)?;
    }
    Ok(reports)
}

fn uses_norms(s: SuiteName) -> bool {
    matches!(
        s,
        SuiteName::MetricAxioms | SuiteName::PseudoMetricAxioms | SuiteName::CostConstraints
    )
}

fn run_one(suite: SuiteName, cfg: &RunConfig, out: &mut Vec<TrialReport>) -> Result<(), CheckError> {
    let sc = cfg.suite_config(suite);
    match suite {
        SuiteName::MetricAxioms | SuiteName::PseudoMetricAxioms | SuiteName::CostConstraints => {
            for &n in &cfg.dims {
                for norm in cfg.norms_for(n)? {
                    out.push(match suite {
                        SuiteName::MetricAxioms => ineq::check_metric_axioms(&norm, n, &sc)?,
                        SuiteName::PseudoMetricAxioms => ineq::check_pseudo_metric_axioms(&norm, n, &sc)?,
                        _ => ineq::check_cost_constraints(&norm, &sc)?,
                    });
                }
            }
        }
        SuiteName::KyfanChain => {
            for &n in &cfg.dims {
                out.push(ineq::check_kyfan_chain(n, &sc)?);
            }
        }
        SuiteName::UnitaryLidskii | SuiteName::HermitianLidskii => {
            for &n in &cfg.dims {
                if cfg.p.is_some_and(|p| p > n) {
                    continue;
                }
                out.push(if suite == SuiteName::UnitaryLidskii {
                    ineq::check_unitary_lidskii(n, cfg.p, &sc)?
                } else {
                    ineq::check_hermitian_lidskii(n, cfg.p, &sc)?
                });
            }
        }
        SuiteName::SchurTransfer => {
            for &n in &cfg.dims {
                for h in TransferFunctional::builtins(n)? {
                    let r = ineq::check_schur_transfer(&h, n, cfg.iso_trials, &sc)?;
                    out.extend([r.isotonicity, r.base, r.unitary]);
                }
            }
        }
        SuiteName::Perturbation => {
            for &n in &cfg.dims {
                for &eps in &cfg.eps {
                    out.push(ineq::check_perturbation(n, eps, &sc)?);
                }
            }
        }
        SuiteName::GeneralLidskii => {
            let text = cfg
                .sets
                .as_deref()
                .ok_or_else(|| CheckError::Usage("general-lidskii needs --sets".into()))?;
            let sets: GeneralIndexSets =
                serde_json::from_str(text).map_err(|e| CheckError::Usage(format!("--sets: {e}")))?;
            for &n in &cfg.dims {
                out.push(ineq::check_general_lidskii(&sets, n, &sc)?);
            }
        }
        SuiteName::All => unreachable!("expanded by run"),
    }
    Ok(())
}
