//! Exceptional types for the linear-subspace dimension count.
//!
//! For a complete intersection of type `(n, d_1..d_c)` and an `l`-plane,
//! the count
//!
//! `Σ C(d_i+l, d_i) - (n-l)(l+1) + max(0, Σ C(d_i+l-1, l) + l + 1 - n)`
//!
//! must exceed `n + 1` for the nodal construction to control every
//! `l`-plane. Only `n-c >= 2l >= n-c-2` matters. Types failing it are
//! exceptional. At `l = 0` the count is `c - n`, independent of the
//! degrees, so that family is a condition rather than a list. `l = 1`
//! reduces to `3 <= n-c <= 4` and `2 Σ d_i <= 4n - c - 3` once the `l = 0`
//! types are set aside. For `l >= 1` the count is nondecreasing in every
//! degree, which bounds the enumeration.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::combinat::{binom, binom_u128, CIType};
use crate::exec::Exec;

/// The count above, exactly.
pub fn codim_formula(ci: &CIType, l: u32) -> BigInt {
    let n = i64::from(ci.ambient());
    let l = i64::from(l);
    let mut first = BigInt::from(0);
    let mut inner = BigInt::from(l + 1 - n);
    for &d in ci.degrees() {
        let d = i64::from(d);
        first += binom(d + l, d);
        inner += binom(d + l - 1, l);
    }
    let inner = if inner > BigInt::from(0) { inner } else { BigInt::from(0) };
    first - (n - l) * (l + 1) + inner
}

fn codim_fast(n: u32, degrees: &[u32], l: u32) -> i128 {
    let (n, l) = (i64::from(n), i64::from(l));
    let mut first: i128 = 0;
    let mut inner: i128 = (l + 1 - n) as i128;
    for &d in degrees {
        let d = i64::from(d);
        first += binom_u128(d + l, d) as i128;
        inner += binom_u128(d + l - 1, l) as i128;
    }
    first - ((n - l) * (l + 1)) as i128 + inner.max(0)
}

/// Whether `l` lies in the relevant window `n-c >= 2l >= n-c-2`.
pub fn in_window(ci: &CIType, l: u32) -> bool {
    let m = ci.dim();
    m >= 2 * l && 2 * l + 2 >= m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionRecord {
    pub ci: CIType,
    pub l: u32,
    pub value: String,
    pub threshold: u32,
    pub is_exception: bool,
}

impl ExceptionRecord {
    pub fn evaluate(ci: &CIType, l: u32) -> Self {
        let value = codim_formula(ci, l);
        let threshold = ci.ambient() + 1;
        ExceptionRecord {
            ci: ci.clone(),
            l,
            is_exception: value <= BigInt::from(threshold),
            value: value.to_string(),
            threshold,
        }
    }
}

/// `l = 0` family in the form the count yields within dimension at least 2.
pub fn point_condition(ci: &CIType) -> bool {
    ci.dim() == 2
}

/// `l = 1` family once `l = 0` types are excluded.
pub fn line_condition(ci: &CIType) -> bool {
    let m = ci.dim();
    let n = ci.ambient();
    (3..=4).contains(&m) && 2 * ci.degree_sum() + ci.codim() + 3 <= 4 * n
}

/// Every exceptional record with `l >= 1`, ambient `<= n_max`, `d_c >= 3`,
/// in `(l, type)` order. `l = 0` is not listable; see [`point_condition`].
pub fn enumerate_subspace_exceptions(n_max: u32, exec: Exec) -> Vec<ExceptionRecord> {
    let mut jobs = Vec::new();
    for n in 2..=n_max {
        for c in 1..n {
            let m = n - c;
            for l in 1..=m / 2 {
                if 2 * l + 2 >= m {
                    jobs.push((n, c, l));
                }
            }
        }
    }
    let found = exec.map(jobs, |(n, c, l)| {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(c as usize);
        walk(n, c as usize, l, 2, &mut cur, &mut out);
        out
    });
    let mut records: Vec<ExceptionRecord> = found
        .into_iter()
        .flatten()
        .map(|(n, degs, l)| ExceptionRecord::evaluate(&CIType::new(n, degs).expect("valid"), l))
        .collect();
    records.sort_by(|a, b| (a.l, &a.ci).cmp(&(b.l, &b.ci)));
    records
}

/// Depth-first over nondecreasing degree tuples. The count is monotone in
/// every degree, so repeating the current degree to the end is the
/// cheapest completion; once that exceeds `n + 1`, larger degrees at this
/// position cannot help either.
fn walk(n: u32, c: usize, l: u32, lo: u32, cur: &mut Vec<u32>, out: &mut Vec<(u32, Vec<u32>, u32)>) {
    let threshold = i128::from(n) + 1;
    for d in lo.. {
        let mut probe = cur.clone();
        probe.resize(c, d);
        if codim_fast(n, &probe, l) > threshold {
            break;
        }
        if cur.len() + 1 == c {
            if d >= 3 {
                out.push((n, probe, l));
            }
        } else {
            cur.push(d);
            walk(n, c, l, d, cur, out);
            cur.pop();
        }
    }
}

/// Filter rules, named so each can be tested on its own.
pub mod rules {
    use crate::combinat::CIType;

    /// Hypersurfaces are already settled in the literature.
    pub fn not_hypersurface(ci: &CIType) -> bool {
        ci.codim() >= 2
    }

    /// `Σ d_i <= n`: anticanonical positive. Otherwise `K_X` is nef and the
    /// extension argument applies without the subspace count.
    pub fn fano(ci: &CIType) -> bool {
        ci.degree_sum() <= ci.ambient()
    }

    /// Intersections of quadrics are outside the argument altogether.
    pub fn not_all_quadric(ci: &CIType) -> bool {
        !ci.is_all_quadric()
    }

    pub fn all(ci: &CIType) -> bool {
        not_hypersurface(ci) && fano(ci) && not_all_quadric(ci)
    }
}

/// Apply the filter to the listed records plus every type up to `n_max`
/// satisfying the `l = 0` or `l = 1` condition; result sorted, deduplicated.
pub fn filter_theorem_exceptions(records: &[ExceptionRecord], n_max: u32) -> Vec<CIType> {
    let mut out: BTreeSet<CIType> = records
        .iter()
        .filter(|r| r.is_exception && rules::all(&r.ci))
        .map(|r| r.ci.clone())
        .collect();
    // Fano types have degrees at most n, so this enumeration is complete.
    for ci in CIType::enumerate(3..=n_max, n_max, n_max) {
        if !rules::all(&ci) || ci.top_degree() < 3 {
            continue;
        }
        if point_condition(&ci) || line_condition(&ci) {
            out.insert(ci);
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(n: u32, d: &[u32]) -> CIType {
        CIType::new(n, d.to_vec()).unwrap()
    }

    fn types_at(records: &[ExceptionRecord], l: u32) -> Vec<String> {
        records.iter().filter(|r| r.l == l).map(|r| r.ci.to_string()).collect()
    }

    #[test]
    fn formula_examples() {
        assert_eq!(codim_formula(&ci(5, &[3]), 2), BigInt::from(5));
        assert_eq!(codim_formula(&ci(6, &[3]), 2), BigInt::from(1));
        assert_eq!(codim_formula(&ci(12, &[3]), 5), BigInt::from(29));
        for n in 3..14 {
            for l in 0..n {
                let x = ci(n, &[2, 3]);
                assert_eq!(BigInt::from(codim_fast(n, x.degrees(), l)), codim_formula(&x, l));
            }
        }
    }

    #[test]
    fn point_count_is_degree_free() {
        for n in 3..10 {
            for degs in [vec![2u32], vec![3], vec![7], vec![2, 5]] {
                let x = CIType::new(n, degs).unwrap();
                let c = i64::from(x.codim());
                assert_eq!(codim_formula(&x, 0), BigInt::from(c - i64::from(n)));
            }
        }
    }

    #[test]
    fn lists_at_twelve() {
        let r = enumerate_subspace_exceptions(12, Exec::Sequential);
        assert!(r.iter().all(|x| x.is_exception && in_window(&x.ci, x.l)));
        assert_eq!(
            types_at(&r, 2),
            ["(5,3)", "(6,3)", "(7,2,3)", "(7,3)", "(7,4)", "(8,2,3)", "(8,3,3)", "(9,2,2,3)"]
        );
        assert_eq!(types_at(&r, 3), ["(8,3)", "(9,3)", "(10,2,3)"]);
        assert_eq!(types_at(&r, 4), ["(11,3)"]);
        assert!(types_at(&r, 5).is_empty());
    }

    /// Brute force over a degree box, independent of the pruned walk.
    #[test]
    fn walk_matches_box_enumeration() {
        let fast = enumerate_subspace_exceptions(11, Exec::Sequential);
        let mut slow = Vec::new();
        for x in CIType::enumerate(2..=11, 10, 9) {
            if x.top_degree() < 3 {
                continue;
            }
            for l in 1..=x.dim() / 2 {
                if in_window(&x, l) {
                    let r = ExceptionRecord::evaluate(&x, l);
                    if r.is_exception {
                        slow.push(r);
                    }
                }
            }
        }
        slow.sort_by(|a, b| (a.l, &a.ci).cmp(&(b.l, &b.ci)));
        assert_eq!(fast, slow);
    }

    #[test]
    fn line_condition_matches_formula() {
        for r in enumerate_subspace_exceptions(14, Exec::Sequential).iter().filter(|r| r.l == 1) {
            if r.ci.dim() >= 3 {
                assert!(line_condition(&r.ci), "{}", r.ci);
            }
        }
        for x in CIType::enumerate(4..=14, 6, 8) {
            if line_condition(&x) && x.top_degree() >= 3 {
                assert!(ExceptionRecord::evaluate(&x, 1).is_exception, "{x}");
            }
        }
    }

    #[test]
    fn stable_up_to_twenty_four() {
        let small = enumerate_subspace_exceptions(12, Exec::Sequential);
        let big = enumerate_subspace_exceptions(24, Exec::Parallel);
        let high = |v: &[ExceptionRecord]| v.iter().filter(|r| r.l >= 2).cloned().collect::<Vec<_>>();
        assert_eq!(high(&small), high(&big));
    }

    #[test]
    fn monotone_in_each_degree() {
        for x in CIType::enumerate(3..=12, 4, 7) {
            for l in 0..=x.dim() / 2 {
                let base = codim_formula(&x, l);
                for i in 0..x.codim() as usize {
                    let mut up = x.degrees().to_vec();
                    up[i] += 1;
                    let y = CIType::new(x.ambient(), up).unwrap();
                    assert!(codim_formula(&y, l) >= base, "{x} -> {y} at l={l}");
                }
            }
        }
    }

    #[test]
    fn theorem_list() {
        let r = enumerate_subspace_exceptions(12, Exec::Sequential);
        let got: Vec<String> = filter_theorem_exceptions(&r, 12).iter().map(|c| c.to_string()).collect();
        assert_eq!(
            got,
            [
                "(5,2,3)", "(6,2,3)", "(6,2,4)", "(6,3,3)", "(7,2,2,3)", "(7,2,3)", "(8,2,3)",
                "(8,3,3)", "(9,2,2,3)", "(10,2,3)"
            ]
        );
    }

    #[test]
    fn filter_rules() {
        assert!(!rules::fano(&ci(5, &[2, 4])));
        assert!(!rules::not_hypersurface(&ci(7, &[4])));
        assert!(!rules::not_all_quadric(&ci(6, &[2, 2, 2])));
        assert!(rules::all(&ci(6, &[2, 4])));
    }
}
