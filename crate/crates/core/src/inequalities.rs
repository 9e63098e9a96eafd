//! Seeded property suites for the eigenphase and eigenvalue inequalities.
//!
//! Every suite follows the same shape: a trial draws random inputs from a
//! per-trial random stream, evaluates a list of margins (right-hand side
//! minus left-hand side, so a negative margin is a violation), and the
//! runner reduces the margins over all trials into a [`TrialReport`].
//!
//! Determinism: trial `t` always draws from ChaCha8 stream `t` of the
//! master seed, trials may run in parallel on the current rayon pool, and
//! the reduction walks trials in index order. Reports are therefore
//! identical for any thread count. The worst trial's inputs are stored in
//! the report and [`replay`] re-evaluates them.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::random::hermitian_with_spectrum;
use crate::linalg::{
    adjoint, exp_i_hermitian, gue_hermitian, haar_unitary, hermitian_eigenvalues, matmul, ComplexMatrix,
};
use crate::majorization::{
    enumerate_triples, sample_dominated_pair, GeneralIndexSets, IndexTriple, OrderRelation, DEFAULT_MAJORIZATION_TOL,
};
use crate::metrics::{abs_phases, cost_with, eigenphases, metric_with, pseudo_metric_with};
use crate::norms::{ky_fan_vector, singular_values, SymmetricNorm, SymmetricNormSpec};
use crate::tolerance::Tolerances;
use crate::C64;

/// Slack for inequalities computed directly from eigendecompositions.
pub const EXACT_TOL: f64 = 1e-9;
/// Slack where the phase minimizer is in the loop.
pub const SOLVER_TOL: f64 = 1e-6;
/// Slack for the metric triangle inequality and the cost constraints.
pub const METRIC_TOL: f64 = 1e-8;

/// Seed, trial count and slack for one suite run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
}

impl SuiteConfig {
    pub fn new(seed: u64, trials: usize, tol: f64) -> Self {
        Self { seed, trials, tol }
    }
}

/// Aggregated outcome of a suite run.
///
/// `violations` counts individual failed checks (a trial can contribute
/// several). `worst_margin` is the most negative slack observed; it is
/// below `-tol` exactly when `violations > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub suite: String,
    pub params: Map<String, Value>,
    pub trials: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub seed: u64,
    pub worst_case: Value,
}

impl TrialReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// One randomized property suite.
pub trait Suite: Sync {
    type Input: Serialize + DeserializeOwned + Send;

    fn name(&self) -> &'static str;

    /// Parameters echoed into the report (dimension, norm, …).
    fn params(&self) -> Map<String, Value>;

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Self::Input>;

    /// Margins of every check on one input, tagged with a check id that
    /// [`Suite::describe`] turns into a label.
    fn evaluate(&self, input: &Self::Input) -> Result<Vec<(usize, f64)>>;

    fn describe(&self, check: usize) -> String;
}

/// The random stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Per-trial reduction: violations and the worst check.
#[derive(Debug, Clone, Copy)]
pub struct TrialOutcome {
    pub violations: usize,
    pub worst_margin: f64,
    pub worst_check: usize,
}

fn reduce_margins(margins: &[(usize, f64)], tol: f64) -> Result<TrialOutcome> {
    let mut out = TrialOutcome {
        violations: 0,
        worst_margin: f64::INFINITY,
        worst_check: 0,
    };
    for &(id, m) in margins {
        if m.is_nan() {
            return Err(Error::NumericalFailure(format!("check {id} produced NaN")));
        }
        if m < -tol {
            out.violations += 1;
        }
        if m < out.worst_margin {
            out.worst_margin = m;
            out.worst_check = id;
        }
    }
    Ok(out)
}

/// Runs a single trial through the same path the suite runner uses.
pub fn run_trial<S: Suite>(suite: &S, seed: u64, trial: usize, tol: f64) -> Result<(S::Input, TrialOutcome)> {
    let wrap = |e: Error| Error::Trial {
        trial,
        source: Box::new(e),
    };
    let input = suite.sample(&mut trial_rng(seed, trial)).map_err(wrap)?;
    let margins = suite.evaluate(&input).map_err(wrap)?;
    let outcome = reduce_margins(&margins, tol).map_err(wrap)?;
    Ok((input, outcome))
}

/// Runs `cfg.trials` trials on the current rayon pool.
pub fn run_suite<S: Suite>(suite: &S, cfg: &SuiteConfig) -> Result<TrialReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let outcomes: Vec<Result<TrialOutcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(suite, cfg.seed, t, cfg.tol).map(|(_, o)| o))
        .collect();

    let mut violations = 0;
    let mut worst: Option<(usize, TrialOutcome)> = None;
    for (t, outcome) in outcomes.into_iter().enumerate() {
        let o = outcome?;
        violations += o.violations;
        // strict comparison keeps the lowest trial index on ties
        if worst.is_none_or(|(_, w)| o.worst_margin < w.worst_margin) {
            worst = Some((t, o));
        }
    }
    let (worst_trial, worst_outcome) = worst.expect("at least one trial");
    let (input, _) = run_trial(suite, cfg.seed, worst_trial, cfg.tol)?;

    let mut params = suite.params();
    params.insert("tol".into(), json!(cfg.tol));
    Ok(TrialReport {
        suite: suite.name().to_string(),
        params,
        trials: cfg.trials,
        violations,
        worst_margin: worst_outcome.worst_margin,
        seed: cfg.seed,
        worst_case: json!({
            "trial": worst_trial,
            "check": suite.describe(worst_outcome.worst_check),
            "input": serde_json::to_value(&input)?,
        }),
    })
}

/// Re-evaluates the stored worst case of `report` and returns its smallest
/// margin.
pub fn replay<S: Suite>(suite: &S, report: &TrialReport) -> Result<f64> {
    let input: S::Input = serde_json::from_value(report.worst_case["input"].clone())?;
    let margins = suite.evaluate(&input)?;
    Ok(margins.iter().map(|&(_, m)| m).fold(f64::INFINITY, f64::min))
}

fn base_params(n: usize) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("n".into(), json!(n));
    m
}

fn require_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("dimension must be >= 1".into()))
    } else {
        Ok(())
    }
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn abs_sorted(v: &[f64]) -> Vec<f64> {
    sorted_desc(v.iter().map(|x| x.abs()).collect())
}

// ---------------------------------------------------------------------------
// Metric and pseudo-metric axioms

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitaryTriple {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
}

fn sample_triple(n: usize, rng: &mut ChaCha8Rng) -> UnitaryTriple {
    UnitaryTriple {
        x: haar_unitary(n, rng),
        y: haar_unitary(n, rng),
        z: haar_unitary(n, rng),
    }
}

/// Triangle inequality, symmetry, `d(X, X) = 0`, left invariance and a
/// quantitative separation bound for the metric.
///
/// Separation: `||X - Y||_F^2 = Σ |e^{ia_j} - 1|^2 <= n · max|a_j|^2` and
/// `g(v) >= g(e_1) · max|v_j|`, so `d(X, Y) >= g(e_1) ||X - Y||_F / sqrt(n)`.
pub struct MetricAxioms {
    pub norm: SymmetricNormSpec,
    pub tol: Tolerances,
}

impl MetricAxioms {
    pub fn new(norm: SymmetricNormSpec) -> Self {
        Self {
            norm,
            tol: Tolerances::default(),
        }
    }

    fn d(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
        metric_with(&self.norm, a, b, &self.tol)
    }
}

impl Suite for MetricAxioms {
    type Input = UnitaryTriple;

    fn name(&self) -> &'static str {
        "metric-axioms"
    }

    fn params(&self) -> Map<String, Value> {
        let mut m = base_params(self.norm.n());
        m.insert("norm".into(), json!(self.norm.to_string()));
        m
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<UnitaryTriple> {
        Ok(sample_triple(self.norm.n(), rng))
    }

    fn evaluate(&self, t: &UnitaryTriple) -> Result<Vec<(usize, f64)>> {
        let n = self.norm.n();
        let dxy = self.d(&t.x, &t.y)?;
        let dyz = self.d(&t.y, &t.z)?;
        let dxz = self.d(&t.x, &t.z)?;
        let dyx = self.d(&t.y, &t.x)?;
        let dxx = self.d(&t.x, &t.x)?;
        let left = self.d(&matmul(&t.z, &t.x)?, &matmul(&t.z, &t.y)?)?;
        let mut checks = vec![
            (0, dxy + dyz - dxz),
            (1, -(dxy - dyx).abs()),
            (2, -dxx),
            (3, -(left - dxy).abs()),
        ];
        let gap = t.x.sub(&t.y)?.frobenius_norm();
        if gap > 1e-6 {
            let mut e1 = vec![0.0; n];
            e1[0] = 1.0;
            let floor = self.norm.norm_unchecked(&e1) * gap / (n as f64).sqrt();
            checks.push((4, dxy - floor));
        }
        Ok(checks)
    }

    fn describe(&self, check: usize) -> String {
        match check {
            0 => "triangle d(X,Z) <= d(X,Y) + d(Y,Z)",
            1 => "symmetry d(X,Y) = d(Y,X)",
            2 => "identity d(X,X) = 0",
            3 => "left invariance d(ZX,ZY) = d(X,Y)",
            _ => "separation d(X,Y) >= g(e1) ||X-Y||_F / sqrt(n)",
        }
        .into()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhasedTriple {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
    pub phase: f64,
}

/// Triangle inequality, symmetry, global-phase invariance, vanishing on
/// phase-equivalent pairs, and `d▽ <= d`.
pub struct PseudoMetricAxioms {
    pub norm: SymmetricNormSpec,
    pub tol: Tolerances,
}

impl PseudoMetricAxioms {
    pub fn new(norm: SymmetricNormSpec) -> Self {
        Self {
            norm,
            tol: Tolerances::default(),
        }
    }

    fn dp(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
        Ok(pseudo_metric_with(&self.norm, a, b, &self.tol)?.value)
    }
}

impl Suite for PseudoMetricAxioms {
    type Input = PhasedTriple;

    fn name(&self) -> &'static str {
        "pseudo-metric-axioms"
    }

    fn params(&self) -> Map<String, Value> {
        let mut m = base_params(self.norm.n());
        m.insert("norm".into(), json!(self.norm.to_string()));
        m
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<PhasedTriple> {
        let UnitaryTriple { x, y, z } = sample_triple(self.norm.n(), rng);
        Ok(PhasedTriple {
            x,
            y,
            z,
            phase: rng.random_range(-PI..PI),
        })
    }

    fn evaluate(&self, t: &PhasedTriple) -> Result<Vec<(usize, f64)>> {
        let rot = C64::from_polar(1.0, t.phase);
        let xs = t.x.scale(rot);
        let dxy = self.dp(&t.x, &t.y)?;
        let dyz = self.dp(&t.y, &t.z)?;
        let dxz = self.dp(&t.x, &t.z)?;
        let dyx = self.dp(&t.y, &t.x)?;
        let dsy = self.dp(&xs, &t.y)?;
        let dxs = self.dp(&t.x, &xs)?;
        let full = metric_with(&self.norm, &t.x, &t.y, &self.tol)?;
        Ok(vec![
            (0, dxy + dyz - dxz),
            (1, -(dxy - dyx).abs()),
            (2, -(dsy - dxy).abs()),
            (3, -dxs),
            (4, full - dxy),
        ])
    }

    fn describe(&self, check: usize) -> String {
        match check {
            0 => "triangle",
            1 => "symmetry",
            2 => "phase invariance d(e^{is}X,Y) = d(X,Y)",
            3 => "d(X, e^{is}X) = 0",
            _ => "pseudo-metric <= metric",
        }
        .into()
    }
}

// ---------------------------------------------------------------------------
// Ky Fan chain

/// For Haar `X, Y, Z` with `a, b, c` the eigenphases of `XY*`, `YZ*`,
/// `XZ*`: the sum of the `k` largest `|c_j|` is at most the sum of the `k`
/// largest entries of `|a|↓ + |b|↓`, for every `k`.
pub struct KyFanChain {
    pub n: usize,
    pub tol: Tolerances,
}

impl KyFanChain {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            tol: Tolerances::default(),
        }
    }

    /// Margins for explicit phase vectors (any order, any sign).
    pub fn margins(a: &[f64], b: &[f64], c: &[f64]) -> Result<Vec<(usize, f64)>> {
        let (a, b, c) = (abs_sorted(a), abs_sorted(b), abs_sorted(c));
        let paired: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        (1..=c.len())
            .map(|k| Ok((k, ky_fan_vector(&paired, k)? - ky_fan_vector(&c, k)?)))
            .collect()
    }
}

impl Suite for KyFanChain {
    type Input = UnitaryTriple;

    fn name(&self) -> &'static str {
        "kyfan-chain"
    }

    fn params(&self) -> Map<String, Value> {
        base_params(self.n)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<UnitaryTriple> {
        Ok(sample_triple(self.n, rng))
    }

    fn evaluate(&self, t: &UnitaryTriple) -> Result<Vec<(usize, f64)>> {
        let ph = |p: &ComplexMatrix, q: &ComplexMatrix| -> Result<Vec<f64>> {
            Ok(eigenphases(&matmul(p, &adjoint(q))?, &self.tol)?.as_slice().to_vec())
        };
        let a = ph(&t.x, &t.y)?;
        let b = ph(&t.y, &t.z)?;
        let c = ph(&t.x, &t.z)?;
        Self::margins(&a, &b, &c)
    }

    fn describe(&self, check: usize) -> String {
        format!("Ky Fan k = {check}")
    }
}

// ---------------------------------------------------------------------------
// Lidskii-type inequalities

fn triples_for(n: usize, p: Option<usize>) -> Result<Vec<IndexTriple>> {
    let ps: Vec<usize> = match p {
        Some(p) => vec![p],
        None => (1..=n).collect(),
    };
    let mut all = Vec::new();
    for p in ps {
        all.extend(enumerate_triples(n, p)?);
    }
    Ok(all)
}

fn describe_triple(t: &IndexTriple) -> String {
    format!("j = {:?}, k = {:?}", t.j(), t.k())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitaryPair {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
}

/// `Σ_ℓ |c|_{j_ℓ + k_ℓ - ℓ} <= Σ_ℓ (|a|_{j_ℓ} + |b|_{k_ℓ})` with `|a|`,
/// `|b|`, `|c|` the sorted absolute eigenphases of `X`, `Y`, `XY`.
pub struct UnitaryLidskii {
    pub n: usize,
    pub p: Option<usize>,
    pub triples: Vec<IndexTriple>,
    pub tol: Tolerances,
}

impl UnitaryLidskii {
    /// `p = None` checks every admissible triple for every `p`.
    pub fn new(n: usize, p: Option<usize>) -> Result<Self> {
        require_dim(n)?;
        Ok(Self {
            n,
            p,
            triples: triples_for(n, p)?,
            tol: Tolerances::default(),
        })
    }
}

impl Suite for UnitaryLidskii {
    type Input = UnitaryPair;

    fn name(&self) -> &'static str {
        "unitary-lidskii"
    }

    fn params(&self) -> Map<String, Value> {
        let mut m = base_params(self.n);
        m.insert("p".into(), self.p.map_or(json!("all"), |p| json!(p)));
        m
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<UnitaryPair> {
        Ok(UnitaryPair {
            x: haar_unitary(self.n, rng),
            y: haar_unitary(self.n, rng),
        })
    }

    fn evaluate(&self, pair: &UnitaryPair) -> Result<Vec<(usize, f64)>> {
        let a = abs_phases(&pair.x, &self.tol)?;
        let b = abs_phases(&pair.y, &self.tol)?;
        let c = abs_phases(&matmul(&pair.x, &pair.y)?, &self.tol)?;
        self.triples
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let (lhs, rhs) = crate::majorization::lidskii_lhs_rhs(t, c.as_slice(), a.as_slice(), b.as_slice())?;
                Ok((i, rhs - lhs))
            })
            .collect()
    }

    fn describe(&self, check: usize) -> String {
        describe_triple(&self.triples[check])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermitianPair {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

fn sample_gue_pair(n: usize, rng: &mut ChaCha8Rng) -> HermitianPair {
    HermitianPair {
        a: gue_hermitian(n, 1.0, rng),
        b: gue_hermitian(n, 1.0, rng),
    }
}

/// `Σ_ℓ λ_{j_ℓ + k_ℓ - ℓ}(A + B) <= Σ_ℓ (λ_{j_ℓ}(A) + λ_{k_ℓ}(B))` on GUE
/// pairs, plus the trace identity. The trace check's margin is
/// `-|tr(A+B) - tr A - tr B| / n`, so the suite slack bounds the defect by
/// `tol · n`.
pub struct HermitianLidskii {
    pub n: usize,
    pub p: Option<usize>,
    pub triples: Vec<IndexTriple>,
    pub tol: Tolerances,
}

impl HermitianLidskii {
    pub fn new(n: usize, p: Option<usize>) -> Result<Self> {
        require_dim(n)?;
        Ok(Self {
            n,
            p,
            triples: triples_for(n, p)?,
            tol: Tolerances::default(),
        })
    }
}

impl Suite for HermitianLidskii {
    type Input = HermitianPair;

    fn name(&self) -> &'static str {
        "hermitian-lidskii"
    }

    fn params(&self) -> Map<String, Value> {
        let mut m = base_params(self.n);
        m.insert("p".into(), self.p.map_or(json!("all"), |p| json!(p)));
        m
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<HermitianPair> {
        Ok(sample_gue_pair(self.n, rng))
    }

    fn evaluate(&self, pair: &HermitianPair) -> Result<Vec<(usize, f64)>> {
        let la = hermitian_eigenvalues(&pair.a, &self.tol)?;
        let lb = hermitian_eigenvalues(&pair.b, &self.tol)?;
        let lc = hermitian_eigenvalues(&pair.a.add(&pair.b)?, &self.tol)?;
        let mut out = Vec::with_capacity(self.triples.len() + 1);
        for (i, t) in self.triples.iter().enumerate() {
            let (lhs, rhs) = crate::majorization::lidskii_lhs_rhs(t, &lc, &la, &lb)?;
            out.push((i, rhs - lhs));
        }
        let trace_gap = lc.iter().sum::<f64>() - la.iter().sum::<f64>() - lb.iter().sum::<f64>();
        out.push((self.triples.len(), -trace_gap.abs() / self.n as f64));
        Ok(out)
    }

    fn describe(&self, check: usize) -> String {
        match self.triples.get(check) {
            Some(t) => describe_triple(t),
            None => "trace identity".into(),
        }
    }
}

/// Empirical check of `Σ_K λ(A+B) <= Σ_I λ(A) + Σ_J λ(B)` for caller
/// supplied sets. Violations mean the sets do not define a valid
/// inequality; nothing here decides validity in advance.
pub struct GeneralLidskii {
    pub n: usize,
    pub sets: GeneralIndexSets,
    pub tol: Tolerances,
}

impl GeneralLidskii {
    pub fn new(n: usize, sets: GeneralIndexSets) -> Result<Self> {
        require_dim(n)?;
        let sets = sets.validated(n)?;
        Ok(Self {
            n,
            sets,
            tol: Tolerances::default(),
        })
    }
}

impl Suite for GeneralLidskii {
    type Input = HermitianPair;

    fn name(&self) -> &'static str {
        "general-lidskii"
    }

    fn params(&self) -> Map<String, Value> {
        let mut m = base_params(self.n);
        m.insert("sets".into(), serde_json::to_value(&self.sets).unwrap_or(Value::Null));
        m
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<HermitianPair> {
        Ok(sample_gue_pair(self.n, rng))
    }

    fn evaluate(&self, pair: &HermitianPair) -> Result<Vec<(usize, f64)>> {
        let la = hermitian_eigenvalues(&pair.a, &self.tol)?;
        let lb = hermitian_eigenvalues(&pair.b, &self.tol)?;
        let lc = hermitian_eigenvalues(&pair.a.add(&pair.b)?, &self.tol)?;
        let (lhs, rhs) = self.sets.lhs_rhs(&lc, &la, &lb)?;
        Ok(vec![(0, rhs - lhs)])
    }

    fn describe(&self, _check: usize) -> String {
        format!(
            "I = {:?}, J = {:?}, K = {:?}",
            self.sets.i(),
            self.sets.j(),
            self.sets.k()
        )
    }
}

// ---------------------------------------------------------------------------
// Transfer from Hermitian sums to unitary products

/// A functional `h(c, a, b)` of three descending nonnegative sequences for
/// which `h(σ(A+B), σ(A), σ(B)) <= 0` holds for Hermitian `A`, `B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferFunctional {
    /// `Σ_{k largest} c - Σ_{k largest} a - Σ_{k largest} b`.
    KyFan { k: usize },
    /// `Σ_ℓ c_{j_ℓ + k_ℓ - ℓ} - Σ_ℓ (a_{j_ℓ} + b_{k_ℓ})`.
    Lidskii(IndexTriple),
}

impl TransferFunctional {
    pub fn evaluate(&self, c: &[f64], a: &[f64], b: &[f64]) -> Result<f64> {
        match self {
            TransferFunctional::KyFan { k } => {
                Ok(ky_fan_vector(c, *k)? - ky_fan_vector(a, *k)? - ky_fan_vector(b, *k)?)
            }
            TransferFunctional::Lidskii(t) => {
                let (lhs, rhs) = crate::majorization::lidskii_lhs_rhs(t, c, a, b)?;
                Ok(lhs - rhs)
            }
        }
    }

    /// The order under which `h` is isotone in its first argument.
    ///
    /// Ky Fan forms and the prefix Lidskii form are isotone under weak
    /// sub-majorization. A Lidskii form that selects a non-prefix index set
    /// is only isotone under slot-wise dominance, which is also the
    /// relation that wrapping eigenvalues into `(-π, π]` produces.
    pub fn isotone_under(&self) -> OrderRelation {
        match self {
            TransferFunctional::KyFan { .. } => OrderRelation::WeakSubmajorization,
            TransferFunctional::Lidskii(t) if t.is_prefix() => OrderRelation::WeakSubmajorization,
            TransferFunctional::Lidskii(_) => OrderRelation::EntrywiseDominance,
        }
    }

    fn dim_ok(&self, n: usize) -> bool {
        match self {
            TransferFunctional::KyFan { k } => *k >= 1 && *k <= n,
            TransferFunctional::Lidskii(t) => t.n() == n,
        }
    }

    pub fn label(&self) -> String {
        match self {
            TransferFunctional::KyFan { k } => format!("kyfan:{k}"),
            TransferFunctional::Lidskii(t) => format!("lidskii:j={:?},k={:?}", t.j(), t.k()),
        }
    }

    /// The built-in family for dimension `n`: every Ky Fan form, every
    /// admissible Lidskii triple with `p <= 2`, and the full prefix triple.
    pub fn builtins(n: usize) -> Result<Vec<Self>> {
        require_dim(n)?;
        let mut out: Vec<Self> = (1..=n).map(|k| TransferFunctional::KyFan { k }).collect();
        for p in 1..=n.min(2) {
            out.extend(enumerate_triples(n, p)?.map(TransferFunctional::Lidskii));
        }
        if n > 2 {
            let full: Vec<usize> = (1..=n).collect();
            out.push(TransferFunctional::Lidskii(IndexTriple::new(full.clone(), full, n)?));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsotonicityInput {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Isotonicity of `h(·, a, b)` under the functional's order relation, with
/// random fixed `a`, `b`.
pub struct TransferIsotonicity {
    pub n: usize,
    pub functional: TransferFunctional,
}

impl Suite for TransferIsotonicity {
    type Input = IsotonicityInput;

    fn name(&self) -> &'static str {
        "schur-transfer/isotonicity"
    }

    fn params(&self) -> Map<String, Value> {
        let mut m = base_params(self.n);
        m.insert("functional".into(), json!(self.functional.label()));
        m.insert(
            "relation".into(),
            serde_json::to_value(self.functional.isotone_under()).unwrap_or(Value::Null),
        );
        m
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<IsotonicityInput> {
        let (lower, upper) = sample_dominated_pair(self.n, self.functional.isotone_under(), rng);
        let mut fixed = || sorted_desc((0..self.n).map(|_| rng.random_range(0.0..PI)).collect());
        let a = fixed();
        let b = fixed();
        Ok(IsotonicityInput { lower, upper, a, b })
    }

    fn evaluate(&self, s: &IsotonicityInput) -> Result<Vec<(usize, f64)>> {
        if !self
            .functional
            .isotone_under()
            .holds(&s.lower, &s.upper, DEFAULT_MAJORIZATION_TOL)?
            .holds
        {
            return Err(Error::NumericalFailure("sampled pair is not ordered".into()));
        }
        let hi = self.functional.evaluate(&s.upper, &s.a, &s.b)?;
        let lo = self.functional.evaluate(&s.lower, &s.a, &s.b)?;
        Ok(vec![(0, hi - lo)])
    }

    fn describe(&self, _check: usize) -> String {
        "h(u, a, b) <= h(u', a, b)".into()
    }
}

/// `h(σ(A+B), σ(A), σ(B)) <= 0` on GUE pairs (singular values of a
/// Hermitian matrix are its absolute eigenvalues).
pub struct TransferBase {
    pub n: usize,
    pub functional: TransferFunctional,
    pub tol: Tolerances,
}

impl Suite for TransferBase {
    type Input = HermitianPair;

    fn name(&self) -> &'static str {
        "schur-transfer/base"
    }

    fn params(&self) -> Map<String, Value> {
        let mut m = base_params(self.n);
        m.insert("functional".into(), json!(self.functional.label()));
        m
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<HermitianPair> {
        Ok(sample_gue_pair(self.n, rng))
    }

    fn evaluate(&self, pair: &HermitianPair) -> Result<Vec<(usize, f64)>> {
        let sa = singular_values(&pair.a, &self.tol)?;
        let sb = singular_values(&pair.b, &self.tol)?;
        let sc = singular_values(&pair.a.add(&pair.b)?, &self.tol)?;
        Ok(vec![(0, -self.functional.evaluate(&sc, &sa, &sb)?)])
    }

    fn describe(&self, _check: usize) -> String {
        "h(s(A+B), s(A), s(B)) <= 0".into()
    }
}

/// `h(|XY|, |X|, |Y|) <= 0` on Haar pairs, with `|X|` the descending
/// absolute eigenphases.
pub struct TransferUnitary {
    pub n: usize,
    pub functional: TransferFunctional,
    pub tol: Tolerances,
}

impl Suite for TransferUnitary {
    type Input = UnitaryPair;

    fn name(&self) -> &'static str {
        "schur-transfer/unitary"
    }

    fn params(&self) -> Map<String, Value> {
        let mut m = base_params(self.n);
        m.insert("functional".into(), json!(self.functional.label()));
        m
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<UnitaryPair> {
        Ok(UnitaryPair {
            x: haar_unitary(self.n, rng),
            y: haar_unitary(self.n, rng),
        })
    }

    fn evaluate(&self, pair: &UnitaryPair) -> Result<Vec<(usize, f64)>> {
        let a = abs_phases(&pair.x, &self.tol)?;
        let b = abs_phases(&pair.y, &self.tol)?;
        let c = abs_phases(&matmul(&pair.x, &pair.y)?, &self.tol)?;
        Ok(vec![(
            0,
            -self.functional.evaluate(c.as_slice(), a.as_slice(), b.as_slice())?,
        )])
    }

    fn describe(&self, _check: usize) -> String {
        "h(|XY|, |X|, |Y|) <= 0".into()
    }
}

/// The three stages of a transfer check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransferReport {
    pub isotonicity: TrialReport,
    pub base: TrialReport,
    pub unitary: TrialReport,
}

impl TransferReport {
    pub fn reports(&self) -> [&TrialReport; 3] {
        [&self.isotonicity, &self.base, &self.unitary]
    }
}

// ---------------------------------------------------------------------------
// Perturbation bound

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbationInput {
    /// Hermitian generator of `X`, spectrum inside `(-π + ε, π - ε)`.
    pub a: ComplexMatrix,
    /// Hermitian generator of `E`, spectrum inside `[-ε, ε]`.
    pub b: ComplexMatrix,
}

/// `X = exp(iA)`, `E = exp(iB)`: the descending eigenphases of `XE` and of
/// `X` differ slot by slot by at most `ε`.
pub struct Perturbation {
    pub n: usize,
    pub eps: f64,
    pub tol: Tolerances,
}

impl Perturbation {
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        require_dim(n)?;
        if !(eps > 0.0 && eps < PI / 4.0) {
            return Err(Error::InvalidArgument(format!("eps = {eps} must lie in (0, pi/4)")));
        }
        Ok(Self {
            n,
            eps,
            tol: Tolerances::default(),
        })
    }
}

impl Suite for Perturbation {
    type Input = PerturbationInput;

    fn name(&self) -> &'static str {
        "perturbation"
    }

    fn params(&self) -> Map<String, Value> {
        let mut m = base_params(self.n);
        m.insert("eps".into(), json!(self.eps));
        m
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<PerturbationInput> {
        let (lo, hi) = (-PI + self.eps, PI - self.eps);
        let spectrum_a: Vec<f64> = (0..self.n)
            .map(|_| loop {
                let v = rng.random_range(lo..hi);
                if v > lo {
                    break v;
                }
            })
            .collect();
        let spectrum_b: Vec<f64> = (0..self.n).map(|_| rng.random_range(-self.eps..=self.eps)).collect();
        Ok(PerturbationInput {
            a: hermitian_with_spectrum(&spectrum_a, rng),
            b: hermitian_with_spectrum(&spectrum_b, rng),
        })
    }

    fn evaluate(&self, s: &PerturbationInput) -> Result<Vec<(usize, f64)>> {
        let x = exp_i_hermitian(&s.a, &self.tol)?;
        let e = exp_i_hermitian(&s.b, &self.tol)?;
        let a = eigenphases(&x, &self.tol)?;
        let c = eigenphases(&matmul(&x, &e)?, &self.tol)?;
        Ok(a.as_slice()
            .iter()
            .zip(c.as_slice())
            .enumerate()
            .map(|(j, (aj, cj))| (j + 1, self.eps - (cj - aj).abs()))
            .collect())
    }

    fn describe(&self, check: usize) -> String {
        format!("|c_{check} - a_{check}| <= eps")
    }
}

// ---------------------------------------------------------------------------
// Cost-function constraints

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CostInput {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub w: ComplexMatrix,
    pub phase: f64,
}

/// `f(X) = d▽(X, I)` satisfies: `f(I) = 0`, `f(e^{ir}X) = f(X)`,
/// `f(X*) = f(X)`, `f(W X W*) = f(X)` and `f(XY) <= f(X) + f(Y)`.
pub struct CostConstraints {
    pub norm: SymmetricNormSpec,
    pub tol: Tolerances,
}

impl CostConstraints {
    pub fn new(norm: SymmetricNormSpec) -> Self {
        Self {
            norm,
            tol: Tolerances::default(),
        }
    }

    fn f(&self, x: &ComplexMatrix) -> Result<f64> {
        cost_with(&self.norm, x, &self.tol)
    }
}

impl Suite for CostConstraints {
    type Input = CostInput;

    fn name(&self) -> &'static str {
        "cost-constraints"
    }

    fn params(&self) -> Map<String, Value> {
        let mut m = base_params(self.norm.n());
        m.insert("norm".into(), json!(self.norm.to_string()));
        m
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<CostInput> {
        let n = self.norm.n();
        Ok(CostInput {
            x: haar_unitary(n, rng),
            y: haar_unitary(n, rng),
            w: haar_unitary(n, rng),
            phase: rng.random_range(-PI..PI),
        })
    }

    fn evaluate(&self, s: &CostInput) -> Result<Vec<(usize, f64)>> {
        let n = self.norm.n();
        let fx = self.f(&s.x)?;
        let fy = self.f(&s.y)?;
        let fi = self.f(&ComplexMatrix::identity(n))?;
        let phased = self.f(&s.x.scale(C64::from_polar(1.0, s.phase)))?;
        let inverse = self.f(&adjoint(&s.x))?;
        let conj = self.f(&matmul(&matmul(&s.w, &s.x)?, &adjoint(&s.w))?)?;
        let product = self.f(&matmul(&s.x, &s.y)?)?;
        Ok(vec![
            (0, -fi),
            (1, -(phased - fx).abs()),
            (2, -(inverse - fx).abs()),
            (3, -(conj - fx).abs()),
            (4, fx + fy - product),
        ])
    }

    fn describe(&self, check: usize) -> String {
        match check {
            0 => "f(I) = 0",
            1 => "f(e^{ir}X) = f(X)",
            2 => "f(X^-1) = f(X)",
            3 => "f(W X W^-1) = f(X)",
            _ => "f(XY) <= f(X) + f(Y)",
        }
        .into()
    }
}

// ---------------------------------------------------------------------------
// Entry points

fn check_norm_dim(norm: &SymmetricNormSpec, n: usize) -> Result<()> {
    if norm.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: norm.n(),
        });
    }
    Ok(())
}

pub fn check_metric_axioms(norm: &SymmetricNormSpec, n: usize, cfg: &SuiteConfig) -> Result<TrialReport> {
    check_norm_dim(norm, n)?;
    run_suite(&MetricAxioms::new(norm.clone()), cfg)
}

pub fn check_pseudo_metric_axioms(norm: &SymmetricNormSpec, n: usize, cfg: &SuiteConfig) -> Result<TrialReport> {
    check_norm_dim(norm, n)?;
    run_suite(&PseudoMetricAxioms::new(norm.clone()), cfg)
}

pub fn check_kyfan_chain(n: usize, cfg: &SuiteConfig) -> Result<TrialReport> {
    require_dim(n)?;
    run_suite(&KyFanChain::new(n), cfg)
}

pub fn check_unitary_lidskii(n: usize, p: Option<usize>, cfg: &SuiteConfig) -> Result<TrialReport> {
    run_suite(&UnitaryLidskii::new(n, p)?, cfg)
}

pub fn check_hermitian_lidskii(n: usize, p: Option<usize>, cfg: &SuiteConfig) -> Result<TrialReport> {
    run_suite(&HermitianLidskii::new(n, p)?, cfg)
}

pub fn check_general_lidskii(sets: &GeneralIndexSets, n: usize, cfg: &SuiteConfig) -> Result<TrialReport> {
    run_suite(&GeneralLidskii::new(n, sets.clone())?, cfg)
}

pub fn check_perturbation(n: usize, eps: f64, cfg: &SuiteConfig) -> Result<TrialReport> {
    run_suite(&Perturbation::new(n, eps)?, cfg)
}

pub fn check_cost_constraints(norm: &SymmetricNormSpec, cfg: &SuiteConfig) -> Result<TrialReport> {
    run_suite(&CostConstraints::new(norm.clone()), cfg)
}

/// Runs the isotonicity pre-check (`isotonicity_trials` pairs), then the
/// Hermitian base inequality, then the unitary inequality.
///
/// A failure of either of the first two stages means the premise for
/// transferring the inequality is not met; that is returned as
/// [`Error::TransferPremise`] and the unitary stage is not run.
pub fn check_schur_transfer(
    functional: &TransferFunctional,
    n: usize,
    isotonicity_trials: usize,
    cfg: &SuiteConfig,
) -> Result<TransferReport> {
    require_dim(n)?;
    if !functional.dim_ok(n) {
        return Err(Error::InvalidArgument(format!(
            "functional {} does not fit dimension {n}",
            functional.label()
        )));
    }
    let iso_cfg = SuiteConfig {
        trials: isotonicity_trials,
        tol: DEFAULT_MAJORIZATION_TOL,
        ..*cfg
    };
    let isotonicity = run_suite(
        &TransferIsotonicity {
            n,
            functional: functional.clone(),
        },
        &iso_cfg,
    )?;
    if !isotonicity.passed() {
        return Err(Error::TransferPremise(format!(
            "{} is not isotone in its first argument (worst margin {:e})",
            functional.label(),
            isotonicity.worst_margin
        )));
    }
    let base = run_suite(
        &TransferBase {
            n,
            functional: functional.clone(),
            tol: Tolerances::default(),
        },
        cfg,
    )?;
    if !base.passed() {
        return Err(Error::TransferPremise(format!(
            "Hermitian base inequality for {} fails (worst margin {:e})",
            functional.label(),
            base.worst_margin
        )));
    }
    let unitary = run_suite(
        &TransferUnitary {
            n,
            functional: functional.clone(),
            tol: Tolerances::default(),
        },
        cfg,
    )?;
    Ok(TransferReport {
        isotonicity,
        base,
        unitary,
    })
}
