//! Eigenspace dimensions of a diagonal order-p automorphism acting on
//! degree-d forms, and the dimension bounds built on them.
//!
//! Variable `z_i` carries weight `λ_i ∈ Z/p`; the monomial `z^m` lies in
//! eigenspace `w = Σ λ_i m_i mod p`. This is the covariant convention. The
//! dual action only negates `w`, which permutes the table without changing
//! any bound checked here.
//!
//! Dimensions are computed by a dynamic programme over variables, never by
//! listing monomials.

use std::ops::AddAssign;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::{binom, binom_u128, int, rat, ExactRational};
use crate::exec::Exec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EigenError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("weight {w} is not a residue mod {p}")]
    BadWeight { w: u32, p: u32 },
    #[error("at least one variable is required")]
    NoVariables,
    #[error("trivial action: only {mu} eigenvalue(s) occur, need at least 2")]
    Trivial { mu: u32 },
    #[error("n = {n} is below mu - 1 = {}", mu - 1)]
    TooFewVariables { n: u32, mu: u32 },
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

pub fn primes_up_to(p_max: u32) -> Vec<u32> {
    (2..=p_max).filter(|&p| is_prime(u64::from(p))).collect()
}

/// Order-p diagonal automorphism of P^n given by the weight of each variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EigenSpec {
    p: u32,
    weights: Vec<u32>,
}

impl EigenSpec {
    /// Validates primality and residues. The trivial action (`μ = 1`) is
    /// representable; operations that need `μ >= 2` reject it themselves.
    pub fn new(p: u32, weights: impl Into<Vec<u32>>) -> Result<Self, EigenError> {
        let weights = weights.into();
        if !is_prime(u64::from(p)) {
            return Err(EigenError::NotPrime(p));
        }
        if weights.is_empty() {
            return Err(EigenError::NoVariables);
        }
        if let Some(&w) = weights.iter().find(|&&w| w >= p) {
            return Err(EigenError::BadWeight { w, p });
        }
        Ok(EigenSpec { p, weights })
    }

    /// Spec whose first `a_0` variables have weight 0, next `a_1` weight 1, ...
    pub fn from_multiplicities(p: u32, a: &[u32]) -> Result<Self, EigenError> {
        if a.len() > p as usize {
            return Err(EigenError::BadWeight { w: a.len() as u32 - 1, p });
        }
        let weights: Vec<u32> = a
            .iter()
            .enumerate()
            .flat_map(|(j, &k)| std::iter::repeat_n(j as u32, k as usize))
            .collect();
        EigenSpec::new(p, weights)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Projective dimension `n`; there are `n + 1` variables.
    pub fn n(&self) -> u32 {
        self.weights.len() as u32 - 1
    }

    /// `a_j`, the number of variables of weight `j`, for `j` in `0..p`.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut a = vec![0u32; self.p as usize];
        for &w in &self.weights {
            a[w as usize] += 1;
        }
        a
    }

    /// Number of distinct eigenvalues on linear forms.
    pub fn mu(&self) -> u32 {
        self.multiplicities().iter().filter(|&&a| a > 0).count() as u32
    }

    pub fn sum_sq(&self) -> u64 {
        self.multiplicities().iter().map(|&a| u64::from(a) * u64::from(a)).sum()
    }

    /// `(n+1)^2 - Σ a_j^2`, the dimension of the non-equivariant part of gl.
    pub fn offdiag(&self) -> u64 {
        let m = u64::from(self.n()) + 1;
        m * m - self.sum_sq()
    }

    pub fn require_nontrivial(&self) -> Result<(), EigenError> {
        match self.mu() {
            mu if mu < 2 => Err(EigenError::Trivial { mu }),
            _ => Ok(()),
        }
    }

    /// Add `k` to every weight.
    pub fn shifted(&self, k: u32) -> EigenSpec {
        let p = self.p;
        EigenSpec { p, weights: self.weights.iter().map(|&w| (w + k) % p).collect() }
    }

    /// Translate so that the most frequent weight (smallest on ties) is 0.
    pub fn normalized(&self) -> EigenSpec {
        let a = self.multiplicities();
        let top = *a.iter().max().expect("p >= 2");
        let j = a.iter().position(|&x| x == top).expect("max exists") as u32;
        self.shifted((self.p - j) % self.p)
    }
}

/// Additive counting type for the dimension programme.
pub trait Count: Clone + Zero + One + for<'a> AddAssign<&'a Self> {}
impl<T: Clone + Zero + One + for<'a> AddAssign<&'a T>> Count for T {}

/// Dimension table `t[d][w]` for all `d <= d_max`, as a dynamic programme
/// over variables. Adding a variable of weight `j` is the recurrence
/// `t'[d][w] = t[d][w] + t'[d-1][w-j]`, evaluated in place by increasing `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimTable<T> {
    p: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Count> DimTable<T> {
    /// Table of the empty variable set: only the constant monomial.
    pub fn empty(p: u32, d_max: u32) -> Self {
        let p = p as usize;
        let mut rows = vec![vec![T::zero(); p]; d_max as usize + 1];
        rows[0][0] = T::one();
        DimTable { p, rows }
    }

    pub fn add_variable(&mut self, weight: u32) {
        let j = weight as usize % self.p;
        for d in 1..self.rows.len() {
            let (lo, hi) = self.rows.split_at_mut(d);
            let prev = &lo[d - 1];
            let cur = &mut hi[0];
            for w in 0..self.p {
                cur[w] += &prev[(w + self.p - j) % self.p];
            }
        }
    }

    pub fn from_spec(spec: &EigenSpec, d_max: u32) -> Self {
        let mut t = DimTable::empty(spec.p(), d_max);
        for &w in spec.weights() {
            t.add_variable(w);
        }
        t
    }

    pub fn row(&self, d: u32) -> &[T] {
        &self.rows[d as usize]
    }

    pub fn d_max(&self) -> u32 {
        self.rows.len() as u32 - 1
    }
}

/// Dimensions of `E_{d,η^w}` for every `w` in `Z/p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenDims {
    pub p: u32,
    pub d: u32,
    pub dims: Vec<BigUint>,
}

impl EigenDims {
    pub fn total(&self) -> BigUint {
        self.dims.iter().sum()
    }

    pub fn max(&self) -> BigUint {
        self.dims.iter().max().cloned().unwrap_or_default()
    }
}

pub fn eigenspace_dims(spec: &EigenSpec, d: u32) -> EigenDims {
    let t: DimTable<BigUint> = DimTable::from_spec(spec, d);
    EigenDims { p: spec.p(), d, dims: t.row(d).to_vec() }
}

/// Outcome of a bound check that has a stated range of validity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    OutOfRange,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapMargin {
    pub w: u32,
    /// `C(n+d,d) - dim E_{d,η^w}`.
    pub lhs: BigInt,
    pub holds: bool,
}

/// Codimension of every eigenspace against the off-diagonal count.
///
/// For `d, n >= 3`: `C(n+d,d) - dim E_w > (n+1)^2 - Σ a_j^2` (strict).
/// For `d = 2`: `C(n+2,2) - dim E_w >= ((n+1)^2 - Σ a_j^2) / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub spec: EigenSpec,
    pub d: u32,
    pub strict: bool,
    pub rhs: ExactRational,
    pub margins: Vec<GapMargin>,
    pub verdict: Verdict,
    pub note: Option<String>,
}

pub fn check_codim_gap(spec: &EigenSpec, d: u32) -> GapReport {
    let n = spec.n();
    let out_of_range = |note: String| GapReport {
        spec: spec.clone(),
        d,
        strict: d >= 3,
        rhs: int(0),
        margins: Vec::new(),
        verdict: Verdict::OutOfRange,
        note: Some(note),
    };
    if d < 2 {
        return out_of_range(format!("d = {d} is below 2"));
    }
    if d >= 3 && n < 3 {
        return out_of_range(format!("strict bound needs n >= 3, got n = {n}"));
    }
    if spec.mu() < 2 {
        return out_of_range("trivial action".into());
    }
    let strict = d >= 3;
    let off = int(spec.offdiag());
    let rhs = if strict { off } else { off * rat(1, 2) };
    let total = binom(i64::from(n) + i64::from(d), i64::from(d));
    let dims = eigenspace_dims(spec, d);
    let margins: Vec<GapMargin> = dims
        .dims
        .iter()
        .enumerate()
        .map(|(w, e)| {
            let lhs = &total - BigInt::from(e.clone());
            let l = int(lhs.clone());
            let holds = if strict { l > rhs } else { l >= rhs };
            GapMargin { w: w as u32, lhs, holds }
        })
        .collect();
    let verdict = if margins.iter().all(|m| m.holds) { Verdict::Holds } else { Verdict::Fails };
    GapReport { spec: spec.clone(), d, strict, rhs, margins, verdict, note: None }
}

/// Upper bound on every eigenspace dimension in terms of `(n, μ, d)` only:
/// `Σ_{k=0}^{n+1-μ} (μ-1)^k/μ^{k+1} C(n+d-k,d) + (μ-1)^{n+1-μ}/μ^{n+2-μ} C(d+μ-1,d+1)`.
pub fn max_eigenspace_bound(n: u32, mu: u32, d: u32) -> ExactRational {
    assert!(mu >= 2 && n + 1 >= mu, "bound needs 2 <= mu <= n+1");
    let (n, mu, d) = (i64::from(n), i64::from(mu), i64::from(d));
    let ratio = |k: i64, j: i64| {
        ExactRational::new(BigInt::from(mu - 1).pow(k as u32), BigInt::from(mu).pow(j as u32))
    };
    let mut acc = ExactRational::zero();
    for k in 0..=(n + 1 - mu) {
        acc += ratio(k, k + 1) * int(binom(n + d - k, d));
    }
    acc + ratio(n + 1 - mu, n + 2 - mu) * int(binom(d + mu - 1, d + 1))
}

/// Maximum eigenspace dimension against the closed-form bound, plus the
/// one-step recursion that produces it:
/// `e(d, a) <= (1/μ) C(n+d,d) + ((μ-1)/μ) e(d, a_0 - 1, a_1, ...)`
/// with `a_0` the largest multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxBoundReport {
    pub spec: EigenSpec,
    pub d: u32,
    pub max_dim: BigInt,
    pub bound: ExactRational,
    pub bound_holds: bool,
    pub reduced_max: BigInt,
    pub recursion_rhs: ExactRational,
    pub recursion_holds: bool,
}

pub fn check_max_eigenspace_bound(spec: &EigenSpec, d: u32) -> Result<MaxBoundReport, EigenError> {
    spec.require_nontrivial()?;
    let mu = spec.mu();
    let n = spec.n();
    if n + 1 < mu {
        return Err(EigenError::TooFewVariables { n, mu });
    }
    let spec = spec.normalized();
    let max_dim = BigInt::from(eigenspace_dims(&spec, d).max());
    let bound = max_eigenspace_bound(n, mu, d);
    let bound_holds = int(max_dim.clone()) <= bound;

    // Drop one weight-0 variable.
    let mut reduced = spec.weights().to_vec();
    let pos = reduced.iter().position(|&w| w == 0).expect("normalized has weight 0");
    reduced.remove(pos);
    let reduced_max = if reduced.is_empty() {
        // Only the constant monomial survives at d = 0.
        if d == 0 { BigInt::one() } else { BigInt::zero() }
    } else {
        let r = EigenSpec { p: spec.p(), weights: reduced };
        BigInt::from(eigenspace_dims(&r, d).max())
    };
    let recursion_rhs = int(binom(i64::from(n) + i64::from(d), i64::from(d))) * rat(1, i64::from(mu))
        + int(reduced_max.clone()) * rat(i64::from(mu) - 1, i64::from(mu));
    let recursion_holds = int(max_dim.clone()) <= recursion_rhs;
    Ok(MaxBoundReport {
        spec,
        d,
        max_dim,
        bound,
        bound_holds,
        reduced_max,
        recursion_rhs,
        recursion_holds,
    })
}

/// Sweep range over weight multisets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRange {
    pub n_min: u32,
    pub n_max: u32,
    pub p_max: u32,
    pub d_min: u32,
    pub d_max: u32,
}

impl Default for SweepRange {
    fn default() -> Self {
        SweepRange { n_min: 3, n_max: 12, p_max: 13, d_min: 2, d_max: 8 }
    }
}

/// Visit every multiplicity vector `(a_0, .., a_{p-1})` with `Σ a_j = n+1`,
/// `a_0 = max a_j` and at least two nonzero entries. The visitor receives
/// the multiplicities and the dimension table of the corresponding spec;
/// tables are shared along the depth-first prefix so each spec costs one
/// incremental update.
pub fn for_each_multiset<F>(p: u32, n: u32, d_max: u32, mut visit: F)
where
    F: FnMut(&[u32], &DimTable<u64>),
{
    let total = n + 1;
    let pu = p as usize;
    let mut a = vec![0u32; pu];
    for a0 in 1..=total {
        let mut t = DimTable::<u64>::empty(p, d_max);
        for _ in 0..a0 {
            t.add_variable(0);
        }
        a[0] = a0;
        rec(1, total - a0, a0, pu, &mut a, &t, &mut visit);
    }

    fn rec<F: FnMut(&[u32], &DimTable<u64>)>(
        j: usize,
        rem: u32,
        cap: u32,
        p: usize,
        a: &mut Vec<u32>,
        t: &DimTable<u64>,
        visit: &mut F,
    ) {
        if j == p {
            if rem == 0 && a.iter().filter(|&&x| x > 0).count() >= 2 {
                visit(a, t);
            }
            return;
        }
        // Residues left to fill must absorb `rem` at most `cap` each.
        if u64::from(rem) > u64::from(cap) * (p - j) as u64 {
            return;
        }
        let mut t2 = t.clone();
        for x in 0..=rem.min(cap) {
            if x > 0 {
                t2.add_variable(j as u32);
            }
            a[j] = x;
            rec(j + 1, rem - x, cap, p, a, &t2, visit);
        }
        a[j] = 0;
    }
}

/// A single violation found by a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepViolation {
    pub p: u32,
    pub multiplicities: Vec<u32>,
    pub d: u32,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub specs: u64,
    pub checks: u64,
    pub violations: Vec<SweepViolation>,
}

impl SweepSummary {
    fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.specs += other.specs;
        self.checks += other.checks;
        self.violations.extend(other.violations);
        self
    }
}

fn sweep_jobs(range: &SweepRange) -> Vec<(u32, u32)> {
    let mut jobs = Vec::new();
    for n in range.n_min..=range.n_max {
        for p in primes_up_to(range.p_max) {
            jobs.push((n, p));
        }
    }
    jobs
}

/// Exhaustive codimension-gap sweep: strict bound for `d >= 3`,
/// halved non-strict bound for `d = 2`.
pub fn sweep_codim_gap(range: &SweepRange, exec: Exec) -> SweepSummary {
    let d_max = range.d_max;
    let d_min = range.d_min.max(2);
    let parts = exec.map(sweep_jobs(range), |(n, p)| {
        let mut s = SweepSummary::default();
        let ni = i64::from(n);
        let totals: Vec<u128> = (0..=d_max).map(|d| binom_u128(ni + i64::from(d), i64::from(d))).collect();
        let m = u128::from(n) + 1;
        for_each_multiset(p, n, d_max, |a, t| {
            s.specs += 1;
            let sq: u128 = a.iter().map(|&x| u128::from(x) * u128::from(x)).sum();
            let off = m * m - sq;
            for d in d_min..=d_max {
                if d >= 3 && n < 3 {
                    continue;
                }
                for (w, &e) in t.row(d).iter().enumerate() {
                    s.checks += 1;
                    let gap = totals[d as usize] - u128::from(e);
                    let ok = if d >= 3 { gap > off } else { 2 * gap >= off };
                    if !ok {
                        s.violations.push(SweepViolation {
                            p,
                            multiplicities: a.to_vec(),
                            d,
                            detail: format!("w={w}: C(n+d,d)-E={gap} vs offdiag {off}"),
                        });
                    }
                }
            }
        });
        s
    });
    parts.into_iter().fold(SweepSummary::default(), SweepSummary::merge)
}

/// Exhaustive sweep of the closed-form maximum bound and its recursion.
pub fn sweep_max_bound(range: &SweepRange, exec: Exec) -> SweepSummary {
    let d_max = range.d_max;
    let d_min = range.d_min.max(1);
    let parts = exec.map(sweep_jobs(range), |(n, p)| {
        let mut s = SweepSummary::default();
        let ni = i64::from(n);
        // Bounds depend only on (n, mu, d).
        let mut bounds: std::collections::HashMap<(u32, u32), ExactRational> = Default::default();
        let totals: Vec<BigInt> = (0..=d_max).map(|d| binom(ni + i64::from(d), i64::from(d))).collect();
        for_each_multiset(p, n, d_max, |a, t| {
            s.specs += 1;
            let mu = a.iter().filter(|&&x| x > 0).count() as u32;
            // Table with one weight-0 variable removed: G'_d = G_d - G_{d-1}.
            let pu = p as usize;
            let reduced: Vec<Vec<u64>> = (0..=d_max)
                .map(|d| (0..pu).map(|w| t.row(d)[w] - if d == 0 { 0 } else { t.row(d - 1)[w] }).collect())
                .collect();
            for d in d_min..=d_max {
                s.checks += 2;
                let max_dim = *t.row(d).iter().max().expect("p >= 2");
                let bound = bounds.entry((mu, d)).or_insert_with(|| max_eigenspace_bound(n, mu, d));
                let md = int(max_dim);
                if md > *bound {
                    s.violations.push(SweepViolation {
                        p,
                        multiplicities: a.to_vec(),
                        d,
                        detail: format!("max {max_dim} above bound {bound}"),
                    });
                }
                let red_max = *reduced[d as usize].iter().max().expect("p >= 2");
                let rhs = int(totals[d as usize].clone()) * rat(1, i64::from(mu))
                    + int(red_max) * rat(i64::from(mu) - 1, i64::from(mu));
                if md > rhs {
                    s.violations.push(SweepViolation {
                        p,
                        multiplicities: a.to_vec(),
                        d,
                        detail: format!("recursion: max {max_dim} above {rhs}"),
                    });
                }
            }
        });
        s
    });
    parts.into_iter().fold(SweepSummary::default(), SweepSummary::merge)
}
