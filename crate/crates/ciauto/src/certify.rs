//! Case engine for diagonal automorphisms of prime order.
//!
//! A diagonal `σ` of order `p` acting trivially on the deformation space of
//! `X` forces `Im J_X + (E_{X,d_1,ξ_1} ⊕ ...)` to fill `⊕ H^0(O_X(d_i))`.
//! Bounding the left side by eigenspace counts reduces that to one of three
//! inequalities, indexed by the degree pattern:
//!
//! * equal degrees `d`, splits `b_1 + b_2 = c`:
//!   `(n+1)^2 - Σa_j^2 + (b_1-b_2) E_{d,ξ} + 2 b_1 b_2 < b_1 C(n+d,d)`
//! * `(2,2,d,..,d)`, splits `b_1 + b_2 = c-2`:
//!   `(n+1)^2 - Σa_j^2 + S + (b_1-b_2) E_{d,ξ} + 2 b_1 b_2
//!    < 2 h^0(O_X(2)) + b_1 (C(n+d,n) - 2C(n+d-2,n) + C(n+d-4,n))`
//!   where `S` bounds `dim E_{X,2,ξ_1} + dim E_{X,2,ξ_2}`
//! * `(2,d,..,d)`, splits `b_1 + b_2 = c-1`:
//!   `((n+1)^2 - Σa_j^2)/2 + (b_1-b_2) E_{d,ξ} + 2 b_1 b_2
//!    < b_1 (C(n+d,n) - C(n+d-2,n))`
//!
//! The reduction itself is trusted; this module evaluates the reduced
//! inequalities exactly for every eigenvalue index, so a failure names the
//! precise `(w, b_1, b_2)`.
//!
//! For `S`, two quadrics in distinct eigenspaces give
//! `min(h^0(O_X(2)), E_{2,ξ_1} + E_{2,ξ_2} - 2)` and two in one eigenspace
//! give `2 E_{2,ξ} - 4`; the worst pair over all indices is used.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::{binom_u128, int, rat, CIType, ExactRational};
use crate::eigencalc::{for_each_multiset, primes_up_to, DimTable, EigenError, EigenSpec};
use crate::exec::Exec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertifyError {
    #[error("{0}: two quadrics form the pencil-of-quadrics case, which has a nontrivial automorphism group (Z/2)^n; use the pencil check instead")]
    PencilOfQuadrics(CIType),
    #[error("{ci}: degree pattern is {found}, not {expected}")]
    WrongPattern { ci: CIType, expected: CaseKind, found: &'static str },
    #[error("{ci}: all degrees are 2, which the eigenspace count does not decide")]
    AllQuadric { ci: CIType },
    #[error("spec has {spec_vars} variables but {ci} needs {}", ci.ambient() + 1)]
    DimensionMismatch { ci: CIType, spec_vars: u32 },
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    EqualDegrees,
    TwoQuadrics,
    OneQuadric,
}

impl std::fmt::Display for CaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseKind::EqualDegrees => "equal-degrees",
            CaseKind::TwoQuadrics => "two-quadrics",
            CaseKind::OneQuadric => "one-quadric",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseCertificate {
    pub ci: CIType,
    pub spec: EigenSpec,
    pub case: CaseKind,
    pub b1: u32,
    pub b2: u32,
    /// Eigenvalue index of `ξ`.
    pub w: u32,
    /// Worst quadric eigenvalue pair, two-quadrics case only.
    pub quadric_pair: Option<(u32, u32)>,
    pub lhs: ExactRational,
    pub rhs: ExactRational,
    pub holds: bool,
}

impl CaseCertificate {
    pub fn margin(&self) -> ExactRational {
        &self.rhs - &self.lhs
    }
}

fn classify(ci: &CIType) -> &'static str {
    let degs = ci.degrees();
    let q = ci.count_degree(2) as usize;
    if degs.iter().all(|&d| d == degs[0]) {
        "equal-degrees"
    } else if q == 2 && degs[2..].iter().all(|&d| d == degs[2]) {
        "two-quadrics"
    } else if q == 1 && degs[1..].iter().all(|&d| d == degs[1]) {
        "one-quadric"
    } else {
        "mixed"
    }
}

/// Multiplicity data needed by the inequalities, detached from `EigenSpec`
/// so the sweep can feed tables straight from the multiset walk.
struct Inputs<'a> {
    n: u32,
    offdiag: u128,
    e2: Option<&'a [u64]>,
    ed: &'a [u64],
}

/// Integer-scaled evaluation: every inequality is `lhs < rhs` with both sides
/// doubled so the halved one-quadric term stays integral.
struct Raw {
    b1: u32,
    b2: u32,
    w: u32,
    pair: Option<(u32, u32)>,
    lhs2: u128,
    rhs2: u128,
}

fn splits(total: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=total / 2).map(move |b2| (total - b2, b2))
}

fn eval_equal(inp: &Inputs, c: u32, d: u32) -> Vec<Raw> {
    let full = binom_u128(i64::from(inp.n + d), i64::from(d));
    let mut out = Vec::new();
    for (w, &e) in inp.ed.iter().enumerate() {
        for (b1, b2) in splits(c) {
            let lhs = inp.offdiag + u128::from(b1 - b2) * u128::from(e) + 2 * u128::from(b1 * b2);
            let rhs = u128::from(b1) * full;
            out.push(Raw { b1, b2, w: w as u32, pair: None, lhs2: 2 * lhs, rhs2: 2 * rhs });
        }
    }
    out
}

fn worst_quadric_pair(e2: &[u64], h2: u128) -> (u128, (u32, u32)) {
    let mut best = (0u128, (0u32, 0u32));
    let mut first = true;
    for (i, &x) in e2.iter().enumerate() {
        for (j, &y) in e2.iter().enumerate().skip(i) {
            let (x, y) = (u128::from(x), u128::from(y));
            let s = if i == j {
                (2 * x).saturating_sub(4)
            } else {
                h2.min((x + y).saturating_sub(2))
            };
            if first || s > best.0 {
                best = (s, (i as u32, j as u32));
                first = false;
            }
        }
    }
    best
}

fn eval_two_quadrics(inp: &Inputs, c: u32, d: u32) -> Vec<Raw> {
    let n = i64::from(inp.n);
    let di = i64::from(d);
    let h2 = binom_u128(n + 2, 2) - 2;
    let (s, pair) = worst_quadric_pair(inp.e2.expect("quadric table"), h2);
    let tail = binom_u128(n + di, n) + binom_u128(n + di - 4, n) - 2 * binom_u128(n + di - 2, n);
    let mut out = Vec::new();
    for (w, &e) in inp.ed.iter().enumerate() {
        for (b1, b2) in splits(c - 2) {
            let lhs = inp.offdiag + s + u128::from(b1 - b2) * u128::from(e) + 2 * u128::from(b1 * b2);
            let rhs = 2 * h2 + u128::from(b1) * tail;
            out.push(Raw { b1, b2, w: w as u32, pair: Some(pair), lhs2: 2 * lhs, rhs2: 2 * rhs });
        }
    }
    out
}

fn eval_one_quadric(inp: &Inputs, c: u32, d: u32) -> Vec<Raw> {
    let n = i64::from(inp.n);
    let di = i64::from(d);
    let tail = binom_u128(n + di, n) - binom_u128(n + di - 2, n);
    let mut out = Vec::new();
    for (w, &e) in inp.ed.iter().enumerate() {
        for (b1, b2) in splits(c - 1) {
            let lhs2 = inp.offdiag + 2 * (u128::from(b1 - b2) * u128::from(e) + 2 * u128::from(b1 * b2));
            let rhs2 = 2 * u128::from(b1) * tail;
            out.push(Raw { b1, b2, w: w as u32, pair: None, lhs2, rhs2 });
        }
    }
    out
}

fn materialize(ci: &CIType, spec: &EigenSpec, case: CaseKind, raws: Vec<Raw>) -> Vec<CaseCertificate> {
    raws.into_iter()
        .map(|r| CaseCertificate {
            ci: ci.clone(),
            spec: spec.clone(),
            case,
            b1: r.b1,
            b2: r.b2,
            w: r.w,
            quadric_pair: r.pair,
            lhs: int(r.lhs2) * rat(1, 2),
            rhs: int(r.rhs2) * rat(1, 2),
            holds: r.lhs2 < r.rhs2,
        })
        .collect()
}

fn tables(spec: &EigenSpec, d: u32) -> DimTable<u64> {
    DimTable::from_spec(spec, d)
}

fn check_spec(ci: &CIType, spec: &EigenSpec) -> Result<(), CertifyError> {
    spec.require_nontrivial()?;
    if spec.n() != ci.ambient() {
        return Err(CertifyError::DimensionMismatch { ci: ci.clone(), spec_vars: spec.n() + 1 });
    }
    Ok(())
}

pub fn certify_equal_degrees(ci: &CIType, spec: &EigenSpec) -> Result<Vec<CaseCertificate>, CertifyError> {
    let found = classify(ci);
    if found != "equal-degrees" {
        return Err(CertifyError::WrongPattern { ci: ci.clone(), expected: CaseKind::EqualDegrees, found });
    }
    let d = ci.degrees()[0];
    if d == 2 && ci.codim() == 2 {
        return Err(CertifyError::PencilOfQuadrics(ci.clone()));
    }
    check_spec(ci, spec)?;
    let t = tables(spec, d);
    let inp = Inputs { n: ci.ambient(), offdiag: u128::from(spec.offdiag()), e2: None, ed: t.row(d) };
    Ok(materialize(ci, spec, CaseKind::EqualDegrees, eval_equal(&inp, ci.codim(), d)))
}

pub fn certify_two_quadrics(ci: &CIType, spec: &EigenSpec) -> Result<Vec<CaseCertificate>, CertifyError> {
    let found = classify(ci);
    if found != "two-quadrics" {
        return Err(CertifyError::WrongPattern { ci: ci.clone(), expected: CaseKind::TwoQuadrics, found });
    }
    check_spec(ci, spec)?;
    let d = ci.top_degree();
    let t = tables(spec, d);
    let inp = Inputs { n: ci.ambient(), offdiag: u128::from(spec.offdiag()), e2: Some(t.row(2)), ed: t.row(d) };
    Ok(materialize(ci, spec, CaseKind::TwoQuadrics, eval_two_quadrics(&inp, ci.codim(), d)))
}

pub fn certify_one_quadric(ci: &CIType, spec: &EigenSpec) -> Result<Vec<CaseCertificate>, CertifyError> {
    let found = classify(ci);
    if found != "one-quadric" {
        return Err(CertifyError::WrongPattern { ci: ci.clone(), expected: CaseKind::OneQuadric, found });
    }
    check_spec(ci, spec)?;
    let d = ci.top_degree();
    let t = tables(spec, d);
    let inp = Inputs { n: ci.ambient(), offdiag: u128::from(spec.offdiag()), e2: None, ed: t.row(d) };
    Ok(materialize(ci, spec, CaseKind::OneQuadric, eval_one_quadric(&inp, ci.codim(), d)))
}

/// The sub-type whose case inequality closes the argument for `ci`.
///
/// An automorphism preserves the ideal generated by the lowest-degree
/// equations, and by the next block modulo those. The case therefore lives
/// on the lowest block of equal degrees, extended past leading quadrics:
/// `(d^k, ...)` with `d >= 3` or `(2^k, ...)` with `k >= 3` reduce to the
/// equal-degree case on that block; `(2,2,d^k,...)` and `(2,d^k,...)` keep
/// the quadrics plus the next block.
pub fn case_reduction(ci: &CIType) -> Result<(CIType, CaseKind), CertifyError> {
    if ci.is_all_quadric() && ci.codim() <= 2 {
        return match ci.codim() {
            2 => Err(CertifyError::PencilOfQuadrics(ci.clone())),
            _ => Err(CertifyError::AllQuadric { ci: ci.clone() }),
        };
    }
    let degs = ci.degrees();
    let n = ci.ambient();
    let quadrics = ci.count_degree(2);
    let block = |start: usize| -> Vec<u32> {
        let d = degs[start];
        degs[start..].iter().copied().take_while(|&x| x == d).collect()
    };
    let mk = |v: Vec<u32>| CIType::new(n, v).expect("sub-type of a valid type");
    match quadrics {
        0 => Ok((mk(block(0)), CaseKind::EqualDegrees)),
        q if q >= 3 => Ok((mk(block(0)), CaseKind::EqualDegrees)),
        2 => {
            let mut v = vec![2, 2];
            v.extend(block(2));
            Ok((mk(v), CaseKind::TwoQuadrics))
        }
        _ => {
            let mut v = vec![2];
            v.extend(block(1));
            Ok((mk(v), CaseKind::OneQuadric))
        }
    }
}

/// Certificates for `ci` in the case engine its reduction selects.
pub fn certify(ci: &CIType, spec: &EigenSpec) -> Result<(CIType, Vec<CaseCertificate>), CertifyError> {
    let (sub, case) = case_reduction(ci)?;
    let certs = match case {
        CaseKind::EqualDegrees => certify_equal_degrees(&sub, spec)?,
        CaseKind::TwoQuadrics => certify_two_quadrics(&sub, spec)?,
        CaseKind::OneQuadric => certify_one_quadric(&sub, spec)?,
    };
    Ok((sub, certs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeSweep {
    pub ci: CIType,
    pub reduced: Option<CIType>,
    pub case: Option<CaseKind>,
    pub skipped: Option<String>,
    pub specs: u64,
    pub certificates: u64,
    pub failing: Vec<CaseCertificate>,
    /// Smallest `rhs - lhs` seen, for reporting how tight the type is.
    pub min_margin: Option<ExactRational>,
}

/// Every weight multiset (`a_0` maximal, `μ >= 2`) for every prime up to
/// `p_max`, evaluated through the case engine for `ci`.
pub fn sweep_type(ci: &CIType, p_max: u32) -> TypeSweep {
    let mut out = TypeSweep {
        ci: ci.clone(),
        reduced: None,
        case: None,
        skipped: None,
        specs: 0,
        certificates: 0,
        failing: Vec::new(),
        min_margin: None,
    };
    let (sub, case) = match case_reduction(ci) {
        Ok(x) => x,
        Err(e) => {
            out.skipped = Some(e.to_string());
            return out;
        }
    };
    let n = sub.ambient();
    let c = sub.codim();
    let d = sub.top_degree();
    let mut min2: Option<i128> = None;
    for p in primes_up_to(p_max) {
        for_each_multiset(p, n, d, |a, t| {
            out.specs += 1;
            let m = u128::from(n) + 1;
            let off = m * m - a.iter().map(|&x| u128::from(x) * u128::from(x)).sum::<u128>();
            let inp = Inputs { n, offdiag: off, e2: Some(t.row(2)), ed: t.row(d) };
            let raws = match case {
                CaseKind::EqualDegrees => eval_equal(&inp, c, d),
                CaseKind::TwoQuadrics => eval_two_quadrics(&inp, c, d),
                CaseKind::OneQuadric => eval_one_quadric(&inp, c, d),
            };
            out.certificates += raws.len() as u64;
            let mut bad = Vec::new();
            for r in raws {
                let m2 = r.rhs2 as i128 - r.lhs2 as i128;
                if min2.is_none_or(|x| m2 < x) {
                    min2 = Some(m2);
                }
                if r.lhs2 >= r.rhs2 {
                    bad.push(r);
                }
            }
            if !bad.is_empty() {
                let spec = EigenSpec::from_multiplicities(p, a).expect("valid multiset");
                out.failing.extend(materialize(&sub, &spec, case, bad));
            }
        });
    }
    out.reduced = Some(sub);
    out.case = Some(case);
    out.min_margin = min2.map(|m| int(m) * rat(1, 2));
    out
}

pub fn sweep_types(types: &[CIType], p_max: u32, exec: Exec) -> Vec<TypeSweep> {
    exec.map(types.to_vec(), |ci| sweep_type(&ci, p_max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::binom;
    use crate::eigencalc::eigenspace_dims;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn ci(n: u32, d: &[u32]) -> CIType {
        CIType::new(n, d.to_vec()).unwrap()
    }

    /// Independent evaluation of the equal-degree inequality with big
    /// rationals from the public dimension API.
    fn oracle_equal(ci: &CIType, spec: &EigenSpec) -> Vec<(u32, u32, u32, bool)> {
        let d = ci.degrees()[0];
        let n = i64::from(ci.ambient());
        let dims = eigenspace_dims(spec, d);
        let mut out = Vec::new();
        for (w, e) in dims.dims.iter().enumerate() {
            let c = ci.codim();
            for b2 in 0..=c / 2 {
                let b1 = c - b2;
                let lhs = int(spec.offdiag()) + int(BigInt::from(e.clone()) * (b1 - b2)) + int(2 * b1 * b2);
                let rhs = int(binom(n + i64::from(d), i64::from(d)) * b1);
                out.push((w as u32, b1, b2, lhs < rhs));
            }
        }
        out.sort();
        out
    }

    #[test]
    fn equal_degree_examples() {
        let x = ci(5, &[3, 3]);
        let s = EigenSpec::new(2, vec![0, 0, 0, 1, 1, 1]).unwrap();
        let certs = certify_equal_degrees(&x, &s).unwrap();
        assert_eq!(certs.len(), 4);
        assert!(certs.iter().all(|c| c.holds));
        let mut got: Vec<_> = certs.iter().map(|c| (c.w, c.b1, c.b2, c.holds)).collect();
        got.sort();
        assert_eq!(got, oracle_equal(&x, &s));

        let x = ci(4, &[2, 2, 2]);
        let s = EigenSpec::new(2, vec![0, 0, 0, 1, 1]).unwrap();
        let certs = certify_equal_degrees(&x, &s).unwrap();
        assert_eq!(certs.len(), 4);

        let e = certify_equal_degrees(&ci(4, &[2, 2]), &s).unwrap_err();
        assert!(matches!(e, CertifyError::PencilOfQuadrics(_)));
        assert!(e.to_string().contains("pencil"));
    }

    #[test]
    fn quadric_case_examples() {
        let x = ci(7, &[2, 2, 3]);
        let s = EigenSpec::from_multiplicities(2, &[4, 4]).unwrap();
        let certs = certify_two_quadrics(&x, &s).unwrap();
        assert_eq!(certs.len(), 2);
        assert!(certs.iter().all(|c| c.b1 + c.b2 == 1 && c.quadric_pair.is_some()));

        let x = ci(9, &[2, 2, 3]);
        let s = EigenSpec::from_multiplicities(3, &[4, 3, 3]).unwrap();
        assert_eq!(certify_two_quadrics(&x, &s).unwrap().len(), 3);

        assert!(matches!(
            certify_two_quadrics(&ci(5, &[2, 3]), &s),
            Err(CertifyError::WrongPattern { found: "one-quadric", .. })
        ));

        let x = ci(6, &[2, 3]);
        let s = EigenSpec::from_multiplicities(2, &[4, 3]).unwrap();
        let certs = certify_one_quadric(&x, &s).unwrap();
        assert_eq!(certs.len(), 2);
        assert!(certs.iter().all(|c| c.holds));

        let x = ci(8, &[2, 3, 3]);
        let s = EigenSpec::from_multiplicities(2, &[5, 4]).unwrap();
        let certs = certify_one_quadric(&x, &s).unwrap();
        assert!(certs.iter().all(|c| c.b1 + c.b2 == 2));

        assert!(matches!(
            certify_one_quadric(&ci(6, &[3, 3]), &s),
            Err(CertifyError::WrongPattern { found: "equal-degrees", .. })
        ));
    }

    #[test]
    fn one_quadric_hand_evaluation() {
        // n=6, (2,3), a=(4,3): offdiag = 49 - 25 = 24; cubic parity counts
        // are 20 + 4*6 = 44 (even) and 10*3 + 10 = 40 (odd); the right side
        // is C(9,6) - C(7,6) = 77.
        let x = ci(6, &[2, 3]);
        let s = EigenSpec::from_multiplicities(2, &[4, 3]).unwrap();
        let certs = certify_one_quadric(&x, &s).unwrap();
        let by_w: Vec<_> = certs.iter().map(|c| (c.w, c.lhs.clone(), c.rhs.clone())).collect();
        assert_eq!(by_w, vec![(0, int(12 + 44), int(77)), (1, int(12 + 40), int(77))]);
    }

    #[test]
    fn reduction_picks_lowest_block() {
        let r = |n, d: &[u32]| case_reduction(&ci(n, d)).map(|(t, k)| (t.to_string(), k));
        assert_eq!(r(7, &[3, 3, 4]).unwrap(), ("(7,3,3)".into(), CaseKind::EqualDegrees));
        assert_eq!(r(8, &[2, 2, 2, 3]).unwrap(), ("(8,2,2,2)".into(), CaseKind::EqualDegrees));
        assert_eq!(r(8, &[2, 2, 3, 4]).unwrap(), ("(8,2,2,3)".into(), CaseKind::TwoQuadrics));
        assert_eq!(r(8, &[2, 4, 4]).unwrap(), ("(8,2,4,4)".into(), CaseKind::OneQuadric));
        assert!(matches!(case_reduction(&ci(5, &[2, 2])), Err(CertifyError::PencilOfQuadrics(_))));
        assert!(matches!(case_reduction(&ci(5, &[2])), Err(CertifyError::AllQuadric { .. })));
    }

    #[test]
    fn sweep_agrees_with_direct_certificates() {
        for x in [ci(5, &[3, 3]), ci(6, &[2, 3]), ci(7, &[2, 2, 3]), ci(6, &[2, 2, 2])] {
            let sw = sweep_type(&x, 5);
            let mut direct = 0u64;
            let mut failing = 0usize;
            for p in primes_up_to(5) {
                for_each_multiset(p, x.ambient(), 2, |a, _| {
                    let s = EigenSpec::from_multiplicities(p, a).unwrap();
                    let (_, certs) = certify(&x, &s).unwrap();
                    direct += certs.len() as u64;
                    failing += certs.iter().filter(|c| !c.holds).count();
                });
            }
            assert_eq!(sw.certificates, direct, "{x}");
            assert_eq!(sw.failing.len(), failing, "{x}");
        }
    }

    proptest! {
        #[test]
        fn outcomes_invariant_under_weight_permutation(
            perm_seed in any::<u64>(),
            a in prop::collection::vec(0u32..4, 3),
        ) {
            let total: u32 = a.iter().sum();
            prop_assume!(total >= 5 && a.iter().filter(|&&x| x > 0).count() >= 2);
            let n = total - 1;
            let spec = EigenSpec::from_multiplicities(3, &a).unwrap();
            let mut w = spec.weights().to_vec();
            let len = w.len();
            for i in (1..len).rev() {
                let j = (perm_seed.rotate_left(i as u32) % (i as u64 + 1)) as usize;
                w.swap(i, j);
            }
            let perm = EigenSpec::new(3, w).unwrap();
            for degs in [vec![3u32, 3], vec![2, 3], vec![4]] {
                let x = CIType::new(n, degs).unwrap();
                let key = |s: &EigenSpec| {
                    let (_, c) = certify(&x, s).unwrap();
                    c.into_iter().map(|c| (c.w, c.b1, c.b2, c.lhs, c.rhs, c.holds)).collect::<Vec<_>>()
                };
                prop_assert_eq!(key(&spec), key(&perm));
            }
        }
    }
}
