//! Weak sub-majorization, randomized isotonicity checks, and the index
//! sets that parametrize Lidskii-type inequalities.
//!
//! Indices follow the 1-based convention of the inequalities themselves at
//! every public boundary (constructors, accessors, JSON); conversion to
//! 0-based slots happens only inside [`lidskii_lhs_rhs`].

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAJORIZATION_TOL: f64 = 1e-10;

/// Outcome of a prefix-sum comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorizationReport {
    pub holds: bool,
    /// `min_k (Σ_{j≤k} v_j - Σ_{j≤k} u_j)` over the sorted inputs.
    pub min_margin: f64,
    /// First 1-based `k` whose prefix inequality fails, if any.
    pub violating_k: Option<usize>,
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Whether `u` is weakly sub-majorized by `v`: every `k`-prefix sum of `u`
/// (sorted descending) is at most the matching prefix sum of `v`, up to
/// `tol`. Both inputs are sorted internally.
pub fn weakly_submajorized(u: &[f64], v: &[f64], tol: f64) -> Result<MajorizationReport> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    let (u, v) = (sorted_desc(u), sorted_desc(v));
    let (mut su, mut sv) = (0.0, 0.0);
    let mut min_margin = f64::INFINITY;
    let mut violating_k = None;
    for k in 0..u.len() {
        su += u[k];
        sv += v[k];
        let margin = sv - su;
        min_margin = min_margin.min(margin);
        if margin < -tol && violating_k.is_none() {
            violating_k = Some(k + 1);
        }
    }
    if u.is_empty() {
        min_margin = 0.0;
    }
    Ok(MajorizationReport {
        holds: violating_k.is_none(),
        min_margin,
        violating_k,
    })
}

/// `u_i <= v_i + tol` for every slot of the descending-sorted inputs.
pub fn entrywise_dominated(u: &[f64], v: &[f64], tol: f64) -> Result<MajorizationReport> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    let (u, v) = (sorted_desc(u), sorted_desc(v));
    let mut min_margin = if u.is_empty() { 0.0 } else { f64::INFINITY };
    let mut violating_k = None;
    for (k, (a, b)) in u.iter().zip(&v).enumerate() {
        let margin = b - a;
        min_margin = min_margin.min(margin);
        if margin < -tol && violating_k.is_none() {
            violating_k = Some(k + 1);
        }
    }
    Ok(MajorizationReport {
        holds: violating_k.is_none(),
        min_margin,
        violating_k,
    })
}

/// Preorder on descending nonnegative vectors that an isotonicity check
/// samples pairs from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderRelation {
    /// Prefix sums of `u` bounded by those of `u'`.
    WeakSubmajorization,
    /// `u_j <= u'_j` slot by slot. Strictly stronger than weak
    /// sub-majorization; it is the relation produced by wrapping
    /// eigenvalues back into `(-π, π]`.
    EntrywiseDominance,
}

impl OrderRelation {
    pub fn holds(&self, u: &[f64], v: &[f64], tol: f64) -> Result<MajorizationReport> {
        match self {
            OrderRelation::WeakSubmajorization => weakly_submajorized(u, v, tol),
            OrderRelation::EntrywiseDominance => entrywise_dominated(u, v, tol),
        }
    }
}

/// Samples a descending nonnegative pair `(u, u')` with `u ≤ u'` in the
/// requested relation.
///
/// `u'` has i.i.d. exponential-like entries. For weak sub-majorization, `u`
/// is obtained from `u'` by a few random pairwise averaging moves (each
/// preserves the total and lowers every prefix sum) followed, with
/// probability 3/4, by subtracting a random nonnegative amount from each
/// entry; with probability 1/4 the totals stay equal so the `k = n`
/// boundary is exercised. For entrywise dominance only the subtraction
/// step is applied.
pub fn sample_dominated_pair<R: Rng + ?Sized>(n: usize, relation: OrderRelation, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let upper: Vec<f64> = sorted_desc(
        &(0..n)
            .map(|_| -rng.random::<f64>().max(1e-300).ln())
            .collect::<Vec<_>>(),
    );
    let mut u = upper.clone();
    if relation == OrderRelation::WeakSubmajorization && n >= 2 {
        for _ in 0..rng.random_range(0..=n) {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            let t: f64 = rng.random();
            let (a, b) = (u[i], u[j]);
            u[i] = t * a + (1.0 - t) * b;
            u[j] = t * b + (1.0 - t) * a;
        }
    }
    if rng.random_bool(0.75) {
        for x in u.iter_mut() {
            *x -= rng.random::<f64>() * *x;
        }
    }
    (sorted_desc(&u), upper)
}

/// Report of a randomized isotonicity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsotonicityReport {
    pub relation: OrderRelation,
    pub trials: usize,
    pub violations: usize,
    /// `min (h(u') - h(u))` over all pairs.
    pub worst_margin: f64,
    pub worst_pair: Option<(Vec<f64>, Vec<f64>)>,
}

impl IsotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Randomized test that `h(u) <= h(u') + tol` whenever `u ≤ u'` in
/// `relation`. Every sampled pair is itself verified against the relation
/// before `h` is evaluated.
pub fn check_isotone<R: Rng + ?Sized>(
    h: &dyn Fn(&[f64]) -> f64,
    n: usize,
    relation: OrderRelation,
    trials: usize,
    rng: &mut R,
    tol: f64,
) -> Result<IsotonicityReport> {
    if n == 0 || trials == 0 {
        return Err(Error::InvalidArgument(
            "isotonicity check needs n >= 1 and trials >= 1".into(),
        ));
    }
    let mut report = IsotonicityReport {
        relation,
        trials,
        violations: 0,
        worst_margin: f64::INFINITY,
        worst_pair: None,
    };
    for _ in 0..trials {
        let (u, upper) = sample_dominated_pair(n, relation, rng);
        if !relation.holds(&u, &upper, DEFAULT_MAJORIZATION_TOL)?.holds {
            return Err(Error::NumericalFailure(format!(
                "pair generator produced an out-of-order pair {u:?} / {upper:?}"
            )));
        }
        let margin = h(&upper) - h(&u);
        if margin < -tol {
            report.violations += 1;
        }
        if margin < report.worst_margin {
            report.worst_margin = margin;
            report.worst_pair = Some((u, upper));
        }
    }
    Ok(report)
}

/// Schur-convexity in the weak sub-majorization sense: `h(u) <= h(u')`
/// whenever `u` is weakly sub-majorized by `u'`.
pub fn check_schur_convex<R: Rng + ?Sized>(
    h: &dyn Fn(&[f64]) -> f64,
    n: usize,
    trials: usize,
    rng: &mut R,
    tol: f64,
) -> Result<IsotonicityReport> {
    check_isotone(h, n, OrderRelation::WeakSubmajorization, trials, rng, tol)
}

/// Paired index sequences `1 <= j_1 < … < j_p <= n`,
/// `1 <= k_1 < … < k_p <= n` with `j_p + k_p - p <= n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TripleWire", into = "TripleWire")]
pub struct IndexTriple {
    j: Vec<usize>,
    k: Vec<usize>,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct TripleWire {
    j: Vec<usize>,
    k: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

impl TryFrom<TripleWire> for IndexTriple {
    type Error = Error;
    fn try_from(w: TripleWire) -> Result<Self> {
        let n =
            w.n.unwrap_or_else(|| w.j.last().copied().unwrap_or(0).max(w.k.last().copied().unwrap_or(0)));
        IndexTriple::new(w.j, w.k, n)
    }
}

impl From<IndexTriple> for TripleWire {
    fn from(t: IndexTriple) -> Self {
        TripleWire {
            j: t.j,
            k: t.k,
            n: Some(t.n),
        }
    }
}

fn strictly_increasing_in_range(seq: &[usize], n: usize) -> bool {
    seq.iter().all(|&x| x >= 1 && x <= n) && seq.windows(2).all(|w| w[0] < w[1])
}

impl IndexTriple {
    pub fn new(j: Vec<usize>, k: Vec<usize>, n: usize) -> Result<Self> {
        if j.is_empty() || j.len() != k.len() {
            return Err(Error::InvalidIndexSet(format!(
                "j and k must be nonempty and of equal length, got {} and {}",
                j.len(),
                k.len()
            )));
        }
        if !strictly_increasing_in_range(&j, n) || !strictly_increasing_in_range(&k, n) {
            return Err(Error::InvalidIndexSet(format!(
                "j = {j:?}, k = {k:?} must be strictly increasing within 1..={n}"
            )));
        }
        let p = j.len();
        if j[p - 1] + k[p - 1] - p > n {
            return Err(Error::InvalidIndexSet(format!(
                "inadmissible: j_p + k_p - p = {} > n = {n}",
                j[p - 1] + k[p - 1] - p
            )));
        }
        Ok(Self { j, k, n })
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    pub fn k(&self) -> &[usize] {
        &self.k
    }

    pub fn p(&self) -> usize {
        self.j.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based indices `j_ℓ + k_ℓ - ℓ` selected from the sum/product side.
    pub fn combined(&self) -> Vec<usize> {
        self.j
            .iter()
            .zip(&self.k)
            .enumerate()
            .map(|(l, (j, k))| j + k - (l + 1))
            .collect()
    }

    /// True for `j = k = (1, …, p)`, where the combined indices form a prefix.
    pub fn is_prefix(&self) -> bool {
        self.j.iter().enumerate().all(|(i, &x)| x == i + 1) && self.j == self.k
    }
}

/// Both sides of `Σ_ℓ c[j_ℓ + k_ℓ - ℓ] <= Σ_ℓ (a[j_ℓ] + b[k_ℓ])` for
/// descending vectors of length `n`. Returns `(lhs, rhs)`.
pub fn lidskii_lhs_rhs(triple: &IndexTriple, c: &[f64], a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    let n = triple.n;
    for (name, v) in [("c", c), ("a", a), ("b", b)] {
        if v.len() != n {
            return Err(Error::InvalidIndexSet(format!(
                "vector {name} has length {} but the triple is for n = {n}",
                v.len()
            )));
        }
    }
    debug_assert!(
        [c, a, b].iter().all(|v| v.windows(2).all(|w| w[0] >= w[1])),
        "inputs must be sorted descending"
    );
    let lhs = triple.combined().iter().map(|&m| c[m - 1]).sum();
    let rhs = triple.j.iter().zip(&triple.k).map(|(&j, &k)| a[j - 1] + b[k - 1]).sum();
    Ok((lhs, rhs))
}

/// Every admissible triple with `p` entries for dimension `n`, ordered
/// lexicographically by `(j, k)`. Each call yields a fresh iterator.
pub fn enumerate_triples(n: usize, p: usize) -> Result<impl Iterator<Item = IndexTriple>> {
    if p < 1 || p > n {
        return Err(Error::InvalidArgument(format!(
            "p = {p} must satisfy 1 <= p <= n = {n}"
        )));
    }
    Ok((1..=n).combinations(p).flat_map(move |j| {
        (1..=n)
            .combinations(p)
            .filter_map(move |k| (j[p - 1] + k[p - 1] - p <= n).then(|| IndexTriple { j: j.clone(), k, n }))
    }))
}

/// Three equal-size subsets of `{1, …, n}` for a general Lidskii-type
/// inequality `Σ_K λ(A+B) <= Σ_I λ(A) + Σ_J λ(B)`.
///
/// Only well-formedness is checked; whether the inequality actually holds
/// for all Hermitian pairs is not decided here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralIndexSets {
    #[serde(rename = "I")]
    i: Vec<usize>,
    #[serde(rename = "J")]
    j: Vec<usize>,
    #[serde(rename = "K")]
    k: Vec<usize>,
}

impl GeneralIndexSets {
    /// Sorts and validates the sets against dimension `n`.
    pub fn new(mut i: Vec<usize>, mut j: Vec<usize>, mut k: Vec<usize>, n: usize) -> Result<Self> {
        for (name, set) in [("I", &mut i), ("J", &mut j), ("K", &mut k)] {
            set.sort_unstable();
            if set.is_empty() {
                return Err(Error::InvalidIndexSet(format!("{name} is empty")));
            }
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidIndexSet(format!("{name} has repeated entries")));
            }
            if set.iter().any(|&x| x < 1 || x > n) {
                return Err(Error::InvalidIndexSet(format!("{name} = {set:?} leaves 1..={n}")));
            }
        }
        if i.len() != j.len() || j.len() != k.len() {
            return Err(Error::InvalidIndexSet(format!(
                "sets must have equal cardinality, got |I| = {}, |J| = {}, |K| = {}",
                i.len(),
                j.len(),
                k.len()
            )));
        }
        Ok(Self { i, j, k })
    }

    /// Re-validates deserialized sets for dimension `n`.
    pub fn validated(self, n: usize) -> Result<Self> {
        Self::new(self.i, self.j, self.k, n)
    }

    pub fn i(&self) -> &[usize] {
        &self.i
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    pub fn k(&self) -> &[usize] {
        &self.k
    }

    pub fn cardinality(&self) -> usize {
        self.i.len()
    }

    /// `(Σ_K c, Σ_I a + Σ_J b)` for descending vectors.
    pub fn lhs_rhs(&self, c: &[f64], a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
        let max = self.i.iter().chain(&self.j).chain(&self.k).copied().max().unwrap_or(0);
        if [c, a, b].iter().any(|v| v.len() < max) {
            return Err(Error::InvalidIndexSet(format!("index {max} exceeds vector length")));
        }
        let lhs = self.k.iter().map(|&x| c[x - 1]).sum();
        let rhs = self.i.iter().map(|&x| a[x - 1]).sum::<f64>() + self.j.iter().map(|&x| b[x - 1]).sum::<f64>();
        Ok((lhs, rhs))
    }
}
