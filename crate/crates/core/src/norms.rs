//! Symmetric norms on `R^n` (symmetric gauge functions).
//!
//! A symmetric norm is invariant under coordinate permutations and sign
//! flips. Three families are built in:
//!
//! * `ℓ_p` for `p ∈ [1, ∞]`;
//! * the Ky Fan `k`-norm, the sum of the `k` largest `|v_j|`;
//! * the `μ`-weighted norm `max_σ Σ_j |μ_j v_σ(j)|`.
//!
//! The `μ`-norm maximum over permutations is attained by pairing `|μ|` and
//! `|v|` both sorted descending (rearrangement inequality), so it costs a
//! sort rather than `n!` evaluations.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{adjoint, eig_hermitian, matmul, ComplexMatrix};
use crate::tolerance::Tolerances;

/// A norm on `R^n` that is invariant under permutations and sign changes.
///
/// Implementors only provide [`SymmetricNorm::norm_unchecked`]; the
/// checked [`SymmetricNorm::evaluate`] validates the input length first.
pub trait SymmetricNorm {
    fn dim(&self) -> usize;

    /// Evaluates the norm; `v.len() == self.dim()` is assumed.
    fn norm_unchecked(&self, v: &[f64]) -> f64;

    fn evaluate(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("vector has non-finite entries".into()));
        }
        Ok(self.norm_unchecked(v))
    }
}

/// Exponent of an `ℓ_p` norm. `∞` is its own variant rather than a float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LpExponent {
    Finite(f64),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NormKind {
    Lp(LpExponent),
    KyFan(usize),
    MuWeighted(Vec<f64>),
}

/// Declarative description of a built-in symmetric norm on `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NormSpecWire", into = "NormSpecWire")]
pub struct SymmetricNormSpec {
    kind: NormKind,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct NormSpecWire {
    norm: String,
    n: usize,
}

impl TryFrom<NormSpecWire> for SymmetricNormSpec {
    type Error = Error;
    fn try_from(w: NormSpecWire) -> Result<Self> {
        SymmetricNormSpec::parse(&w.norm, w.n)
    }
}

impl From<SymmetricNormSpec> for NormSpecWire {
    fn from(s: SymmetricNormSpec) -> Self {
        NormSpecWire {
            norm: s.to_string(),
            n: s.n,
        }
    }
}

impl SymmetricNormSpec {
    pub fn new(kind: NormKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidNormSpec("dimension must be positive".into()));
        }
        match &kind {
            NormKind::Lp(LpExponent::Finite(p)) if !(p.is_finite() && *p >= 1.0) => {
                return Err(Error::InvalidNormSpec(format!("lp exponent must be >= 1, got {p}")));
            }
            NormKind::KyFan(k) if *k < 1 || *k > n => {
                return Err(Error::InvalidNormSpec(format!("kyfan:{k} needs 1 <= k <= {n}")));
            }
            NormKind::MuWeighted(mu) => {
                if mu.len() != n {
                    return Err(Error::InvalidNormSpec(format!(
                        "mu has {} weights but the dimension is {n}",
                        mu.len()
                    )));
                }
                if mu.iter().any(|m| !m.is_finite()) {
                    return Err(Error::InvalidNormSpec("mu weights must be finite".into()));
                }
                if mu.iter().all(|&m| m == 0.0) {
                    return Err(Error::InvalidNormSpec(
                        "mu must have a nonzero weight (all-zero mu is only a seminorm)".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(Self { kind, n })
    }

    pub fn lp(p: f64, n: usize) -> Result<Self> {
        Self::new(NormKind::Lp(LpExponent::Finite(p)), n)
    }

    pub fn linf(n: usize) -> Result<Self> {
        Self::new(NormKind::Lp(LpExponent::Infinity), n)
    }

    pub fn ky_fan(k: usize, n: usize) -> Result<Self> {
        Self::new(NormKind::KyFan(k), n)
    }

    pub fn mu(weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        Self::new(NormKind::MuWeighted(weights), n)
    }

    /// A `μ`-norm with weights drawn uniformly from `[0.1, 1)`.
    pub fn random_mu<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::mu((0..n).map(|_| rng.random_range(0.1..1.0)).collect())
    }

    /// Parses `l1`, `l2`, `linf`, `lp:<p>`, `kyfan:<k>` or `mu:<w1>,<w2>,…`
    /// for dimension `n`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        let kind = match s {
            "l1" => NormKind::Lp(LpExponent::Finite(1.0)),
            "l2" => NormKind::Lp(LpExponent::Finite(2.0)),
            "linf" => NormKind::Lp(LpExponent::Infinity),
            _ => {
                let (head, tail) = s
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidNormSpec(format!("unrecognized norm `{s}`")))?;
                match head {
                    "lp" if matches!(tail, "inf" | "infinity") => NormKind::Lp(LpExponent::Infinity),
                    "lp" => NormKind::Lp(LpExponent::Finite(parse_f64(tail)?)),
                    "kyfan" => NormKind::KyFan(
                        tail.trim()
                            .parse()
                            .map_err(|_| Error::InvalidNormSpec(format!("bad Ky Fan index `{tail}`")))?,
                    ),
                    "mu" => NormKind::MuWeighted(tail.split(',').map(parse_f64).collect::<Result<_>>()?),
                    _ => return Err(Error::InvalidNormSpec(format!("unrecognized norm `{s}`"))),
                }
            }
        };
        Self::new(kind, n)
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The same family re-targeted at dimension `n` (`μ` weights cannot be
    /// re-targeted and must already match).
    pub fn with_dim(&self, n: usize) -> Result<Self> {
        Self::new(self.kind.clone(), n)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidNormSpec(format!("bad number `{s}`")))
}

impl fmt::Display for SymmetricNormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NormKind::Lp(LpExponent::Finite(p)) if *p == 1.0 => write!(f, "l1"),
            NormKind::Lp(LpExponent::Finite(p)) if *p == 2.0 => write!(f, "l2"),
            NormKind::Lp(LpExponent::Finite(p)) => write!(f, "lp:{p}"),
            NormKind::Lp(LpExponent::Infinity) => write!(f, "linf"),
            NormKind::KyFan(k) => write!(f, "kyfan:{k}"),
            NormKind::MuWeighted(mu) => {
                let parts: Vec<String> = mu.iter().map(|m| m.to_string()).collect();
                write!(f, "mu:{}", parts.join(","))
            }
        }
    }
}

fn sorted_abs_desc(v: &[f64]) -> Vec<f64> {
    let mut a: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    a
}

impl SymmetricNorm for SymmetricNormSpec {
    fn dim(&self) -> usize {
        self.n
    }

    fn norm_unchecked(&self, v: &[f64]) -> f64 {
        match &self.kind {
            NormKind::Lp(LpExponent::Infinity) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            NormKind::Lp(LpExponent::Finite(p)) => {
                if *p == 1.0 {
                    return v.iter().map(|x| x.abs()).sum();
                }
                // scale by the max entry so large p cannot overflow
                let m = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                if m == 0.0 {
                    return 0.0;
                }
                m * v.iter().map(|x| (x.abs() / m).powf(*p)).sum::<f64>().powf(1.0 / p)
            }
            NormKind::KyFan(k) => sorted_abs_desc(v).iter().take(*k).sum(),
            NormKind::MuWeighted(mu) => sorted_abs_desc(mu)
                .iter()
                .zip(sorted_abs_desc(v))
                .map(|(m, x)| m * x)
                .sum(),
        }
    }
}

/// Sum of the `k` largest entries of `v`, signs kept.
///
/// This is the functional used on already-nonnegative vectors when
/// comparing sorted phase sequences; it is not a norm on signed input.
pub fn ky_fan_vector(v: &[f64], k: usize) -> Result<f64> {
    if k < 1 || k > v.len() {
        return Err(Error::InvalidArgument(format!(
            "Ky Fan index {k} out of range 1..={}",
            v.len()
        )));
    }
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s[..k].iter().sum())
}

/// Singular values, descending. Hermitian input uses `|λ|`; anything else
/// uses the square roots of the eigenvalues of `M* M`.
pub fn singular_values(m: &ComplexMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    let mut sv: Vec<f64> = if m.is_square() && m.hermiticity_defect()? <= tol.hermiticity {
        eig_hermitian(m, tol)?.values.iter().map(|z| z.re.abs()).collect()
    } else {
        let gram = matmul(&adjoint(m), m)?;
        let mut s: Vec<f64> = eig_hermitian(&gram, tol)?
            .values
            .iter()
            .map(|z| z.re.max(0.0).sqrt())
            .collect();
        s.truncate(m.rows().min(m.cols()));
        s
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Ky Fan `k`-norm of a matrix: the sum of its `k` largest singular values.
pub fn ky_fan_matrix(m: &ComplexMatrix, k: usize, tol: &Tolerances) -> Result<f64> {
    let r = m.rows().min(m.cols());
    if k < 1 || k > r {
        return Err(Error::InvalidArgument(format!("Ky Fan index {k} out of range 1..={r}")));
    }
    Ok(singular_values(m, tol)?[..k].iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormProperty {
    Triangle,
    Homogeneity,
    PermutationInvariance,
    SignInvariance,
    Positivity,
}

/// A failed property check, with the vectors that exhibit it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormViolation {
    pub trial: usize,
    pub property: NormProperty,
    pub vectors: Vec<Vec<f64>>,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormValidationReport {
    pub trials: usize,
    pub violations: Vec<NormViolation>,
}

impl NormValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, property: NormProperty) -> bool {
        self.violations.iter().any(|v| v.property == property)
    }
}

fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let scale = 10f64.powf(rng.random_range(-2.0..2.0));
    (0..n)
        .map(|_| scale * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
        .collect()
}

/// Randomized self-test of the symmetric-norm axioms: triangle inequality,
/// absolute homogeneity, permutation and sign-flip invariance, and
/// positivity on nonzero vectors.
///
/// Each check allows `slack · (1 + |reference value|)`. Failures land in
/// the report; they are not errors.
pub fn validate_symmetric_norm<N, R>(norm: &N, rng: &mut R, trials: usize, slack: f64) -> NormValidationReport
where
    N: SymmetricNorm + ?Sized,
    R: Rng + ?Sized,
{
    let n = norm.dim();
    let mut violations = Vec::new();
    let record =
        |violations: &mut Vec<NormViolation>, trial, property, vectors: Vec<Vec<f64>>, margin: f64, reference: f64| {
            if margin < -slack * (1.0 + reference.abs()) {
                violations.push(NormViolation {
                    trial,
                    property,
                    vectors,
                    margin,
                });
            }
        };

    for trial in 0..trials {
        let u = random_vector(n, rng);
        let v = random_vector(n, rng);
        let gu = norm.norm_unchecked(&u);
        let gv = norm.norm_unchecked(&v);

        let sum: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let gs = norm.norm_unchecked(&sum);
        record(
            &mut violations,
            trial,
            NormProperty::Triangle,
            vec![u.clone(), v.clone()],
            gu + gv - gs,
            gu + gv,
        );

        let alpha: f64 = rng.random_range(-5.0..5.0);
        let scaled: Vec<f64> = u.iter().map(|x| alpha * x).collect();
        let ga = norm.norm_unchecked(&scaled);
        record(
            &mut violations,
            trial,
            NormProperty::Homogeneity,
            vec![u.clone(), vec![alpha]],
            -(ga - alpha.abs() * gu).abs(),
            gu * alpha.abs(),
        );

        let mut permuted = u.clone();
        permuted.shuffle(rng);
        record(
            &mut violations,
            trial,
            NormProperty::PermutationInvariance,
            vec![u.clone(), permuted.clone()],
            -(norm.norm_unchecked(&permuted) - gu).abs(),
            gu,
        );

        let flipped: Vec<f64> = u.iter().map(|&x| if rng.random_bool(0.5) { -x } else { x }).collect();
        record(
            &mut violations,
            trial,
            NormProperty::SignInvariance,
            vec![u.clone(), flipped.clone()],
            -(norm.norm_unchecked(&flipped) - gu).abs(),
            gu,
        );

        if u.iter().any(|&x| x != 0.0) && gu <= 0.0 {
            violations.push(NormViolation {
                trial,
                property: NormProperty::Positivity,
                vectors: vec![u.clone()],
                margin: gu,
            });
        }
    }

    NormValidationReport { trials, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_mu_is_a_symmetric_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            let g = SymmetricNormSpec::random_mu(n, &mut rng).unwrap();
            assert_eq!(g.n(), n);
            assert!(validate_symmetric_norm(&g, &mut rng, 200, 1e-10).passed());
        }
    }

    #[test]
    fn euclidean_pythagorean() {
        let g = SymmetricNormSpec::lp(2.0, 2).unwrap();
        assert_eq!(g.evaluate(&[3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn mu_unit_vector_is_linf() {
        let mu = SymmetricNormSpec::mu(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let linf = SymmetricNormSpec::linf(4).unwrap();
        let v = [0.3, -2.5, 1.0, 2.4];
        assert_eq!(mu.evaluate(&v).unwrap(), 2.5);
        assert_eq!(mu.evaluate(&v).unwrap(), linf.evaluate(&v).unwrap());
    }

    #[test]
    fn mu_two_one_example() {
        let mu = SymmetricNormSpec::mu(vec![2.0, 1.0]).unwrap();
        assert_eq!(mu.evaluate(&[-1.0, 3.0]).unwrap(), 7.0);
    }

    #[test]
    fn large_p_does_not_overflow() {
        let g = SymmetricNormSpec::lp(400.0, 3).unwrap();
        let v = [1e300, 1e300, -1e300];
        let val = g.evaluate(&v).unwrap();
        assert!(val.is_finite() && (val / 1e300 - 1.0).abs() < 0.01);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let g = SymmetricNormSpec::lp(1.0, 3).unwrap();
        assert!(matches!(
            g.evaluate(&[1.0]),
            Err(Error::LengthMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(SymmetricNormSpec::lp(0.5, 2).is_err());
        assert!(SymmetricNormSpec::ky_fan(0, 2).is_err());
        assert!(SymmetricNormSpec::ky_fan(3, 2).is_err());
        assert!(SymmetricNormSpec::mu(vec![0.0, 0.0]).is_err());
        assert!(SymmetricNormSpec::parse("mu:1,2", 3).is_err());
        assert!(SymmetricNormSpec::parse("l3", 3).is_err());
        assert!(SymmetricNormSpec::parse("lp:abc", 3).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["l1", "l2", "linf", "lp:2.5", "kyfan:3", "mu:1,0.5,0.25"] {
            let spec = SymmetricNormSpec::parse(s, 3).unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!(SymmetricNormSpec::parse("lp:inf", 2).unwrap().to_string(), "linf");
    }

    #[test]
    fn ky_fan_vector_examples() {
        assert_eq!(ky_fan_vector(&[5.0, -1.0, 2.0], 2).unwrap(), 7.0);
        assert_eq!(ky_fan_vector(&[5.0, -1.0, 2.0], 3).unwrap(), 6.0);
        assert!(ky_fan_vector(&[1.0], 0).is_err());
        assert!(ky_fan_vector(&[1.0], 2).is_err());
    }

    #[test]
    fn ky_fan_matrix_examples() {
        let tol = Tolerances::default();
        for n in 1..=4 {
            for k in 1..=n {
                let v = ky_fan_matrix(&ComplexMatrix::identity(n), k, &tol).unwrap();
                assert!((v - k as f64).abs() < 1e-12);
            }
        }
        let d = ComplexMatrix::from_real_diagonal(&[3.0, -4.0]);
        assert!((ky_fan_matrix(&d, 1, &tol).unwrap() - 4.0).abs() < 1e-12);
        assert!(ky_fan_matrix(&d, 3, &tol).is_err());
    }

    #[test]
    fn singular_values_of_non_hermitian() {
        // [[0, 2], [0, 0]] has singular values (2, 0)
        let m = ComplexMatrix::from_row_major(2, 2, vec![0.0.into(), 2.0.into(), 0.0.into(), 0.0.into()]).unwrap();
        let sv = singular_values(&m, &Tolerances::default()).unwrap();
        assert!((sv[0] - 2.0).abs() < 1e-12 && sv[1].abs() < 1e-7);
    }

    #[test]
    fn builtins_pass_self_test() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=6 {
            let mut specs = vec![
                SymmetricNormSpec::lp(1.0, n).unwrap(),
                SymmetricNormSpec::lp(2.0, n).unwrap(),
                SymmetricNormSpec::lp(3.5, n).unwrap(),
                SymmetricNormSpec::linf(n).unwrap(),
                SymmetricNormSpec::mu((0..n).map(|i| 1.0 / (i + 1) as f64).collect()).unwrap(),
            ];
            specs.extend((1..=n).map(|k| SymmetricNormSpec::ky_fan(k, n).unwrap()));
            for spec in specs {
                let report = validate_symmetric_norm(&spec, &mut rng, 1000, 1e-10);
                assert!(report.passed(), "{spec}: {:?}", report.violations.first());
            }
        }
    }

    struct SignedSum(usize);

    impl SymmetricNorm for SignedSum {
        fn dim(&self) -> usize {
            self.0
        }
        fn norm_unchecked(&self, v: &[f64]) -> f64 {
            v.iter().sum()
        }
    }

    #[test]
    fn broken_norm_is_caught() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let report = validate_symmetric_norm(&SignedSum(3), &mut rng, 200, 1e-10);
        assert!(!report.passed());
        assert!(report.has(NormProperty::Positivity));
        let v = report
            .violations
            .iter()
            .find(|v| v.property == NormProperty::Positivity)
            .unwrap();
        assert!(v.vectors[0].iter().sum::<f64>() <= 0.0);
    }
}
