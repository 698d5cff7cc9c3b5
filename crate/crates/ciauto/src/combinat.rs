//! Binomials, section-space dimensions and the elementary binomial
//! inequalities that close the eigenspace case analysis.
//!
//! Everything here is exact. Binomials with a negative upper index, a
//! negative lower index, or a lower index above the upper one are zero.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type ExactRational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombinatError {
    #[error("invalid complete intersection type: {0}")]
    InvalidType(String),
    #[error("degree {d} is not among the degrees of {ci}")]
    DegreeNotPresent { ci: CIType, d: u32 },
    #[error("no section-count formula for degree {d} on {ci}: pattern is {pattern}")]
    UnsupportedPattern { ci: CIType, d: u32, pattern: &'static str },
}

pub fn rat(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(x: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(x.into())
}

/// Render `p/q`, or just `p` when the denominator is one.
pub fn fmt_rational(x: &ExactRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// C(a, b) with the zero convention outside `0 <= b <= a`.
pub fn binom(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let k = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// C(a, b) in `u128`, zero outside range. Panics on overflow, which only
/// happens far outside any sweep this crate runs.
pub fn binom_u128(a: i64, b: i64) -> u128 {
    if a < 0 || b < 0 || b > a {
        return 0;
    }
    let k = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (a - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul(a - i).expect("binomial overflow") / (i + 1);
    }
    acc
}

/// h^0(O(d)) on P^n: the number of degree-d monomials in n+1 variables.
pub fn dim_forms(n: u32, d: u32) -> BigInt {
    binom(i64::from(n) + i64::from(d), i64::from(d))
}

/// Ambient dimension plus ascending degree list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CIType {
    n: u32,
    degrees: Vec<u32>,
}

impl CIType {
    /// Degrees are sorted on construction; invariants `d_i >= 2`, `c < n`.
    pub fn new(n: u32, degrees: impl Into<Vec<u32>>) -> Result<Self, CombinatError> {
        let mut degrees = degrees.into();
        degrees.sort_unstable();
        if degrees.is_empty() {
            return Err(CombinatError::InvalidType("empty degree list".into()));
        }
        if degrees[0] < 2 {
            return Err(CombinatError::InvalidType(format!(
                "degree {} < 2 in {degrees:?}",
                degrees[0]
            )));
        }
        if degrees.len() as u32 >= n {
            return Err(CombinatError::InvalidType(format!(
                "codimension {} is not below ambient dimension {n}",
                degrees.len()
            )));
        }
        Ok(CIType { n, degrees })
    }

    pub fn ambient(&self) -> u32 {
        self.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn codim(&self) -> u32 {
        self.degrees.len() as u32
    }

    pub fn dim(&self) -> u32 {
        self.n - self.codim()
    }

    pub fn degree_sum(&self) -> u32 {
        self.degrees.iter().sum()
    }

    pub fn is_all_quadric(&self) -> bool {
        self.degrees.iter().all(|&d| d == 2)
    }

    pub fn top_degree(&self) -> u32 {
        *self.degrees.last().expect("nonempty")
    }

    pub fn count_degree(&self, d: u32) -> u32 {
        self.degrees.iter().filter(|&&x| x == d).count() as u32
    }

    /// Every type `(n, d_1..d_c)` with `n` in `n_range`, `c < n`, and
    /// `2 <= d_i <= max_degree`, `c <= max_codim`, in ascending order.
    pub fn enumerate(
        n_range: std::ops::RangeInclusive<u32>,
        max_codim: u32,
        max_degree: u32,
    ) -> Vec<CIType> {
        fn extend(n: u32, c: usize, lo: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<CIType>) {
            if cur.len() == c {
                out.push(CIType { n, degrees: cur.clone() });
                return;
            }
            for d in lo..=hi {
                cur.push(d);
                extend(n, c, d, hi, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        for n in n_range {
            for c in 1..=max_codim.min(n.saturating_sub(1)) {
                extend(n, c as usize, 2, max_degree, &mut Vec::new(), &mut out);
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for CIType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.n)?;
        for d in &self.degrees {
            write!(f, ",{d}")?;
        }
        write!(f, ")")
    }
}

/// Which displayed section-count formula applies to degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionPattern {
    /// `d` is the smallest degree; only the generators of degree `d` relate.
    Lowest,
    /// `(2, 2, d, ..., d)` queried at `d >= 3`.
    TwoQuadricsThen,
    /// `(2, d, ..., d)` queried at `d >= 3`.
    OneQuadricThen,
}

pub fn section_pattern(ci: &CIType, d: u32) -> Result<SectionPattern, CombinatError> {
    let degs = ci.degrees();
    if !degs.contains(&d) {
        return Err(CombinatError::DegreeNotPresent { ci: ci.clone(), d });
    }
    if degs[0] == d {
        return Ok(SectionPattern::Lowest);
    }
    let quadrics = ci.count_degree(2) as usize;
    let rest_equal = degs[quadrics..].iter().all(|&x| x == d);
    match (quadrics, rest_equal) {
        (2, true) => Ok(SectionPattern::TwoQuadricsThen),
        (1, true) => Ok(SectionPattern::OneQuadricThen),
        _ => Err(CombinatError::UnsupportedPattern {
            ci: ci.clone(),
            d,
            pattern: "mixed degrees below d other than one or two quadrics",
        }),
    }
}

/// h^0(O_X(d)) from the closed-form section counts.
pub fn h0_restricted(ci: &CIType, d: u32) -> Result<BigInt, CombinatError> {
    let n = i64::from(ci.ambient());
    let c = i64::from(ci.codim());
    let di = i64::from(d);
    Ok(match section_pattern(ci, d)? {
        SectionPattern::Lowest => dim_forms(ci.ambient(), d) - ci.count_degree(d),
        SectionPattern::TwoQuadricsThen => {
            binom(n + di, n) - 2 * binom(n + di - 2, n) + binom(n + di - 4, n) - (c - 2)
        }
        SectionPattern::OneQuadricThen => binom(n + di, n) - binom(n + di - 2, n) - (c - 1),
    })
}

/// Named elementary inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityId {
    /// Two-quadrics closing inequality when at least three eigenvalues occur.
    TwoQuadricsMu3,
    /// Two-quadrics closing inequality with exactly two eigenvalues.
    TwoQuadricsMu2,
    /// One-quadric closing inequality at `b_1 = 1, b_2 = 0`, with the
    /// eigenspace replaced by its two-eigenvalue upper bound.
    OneQuadricSplit,
    /// Pairwise term bound `C(a_i+d-2,d-1) a_j + C(a_j+d-2,d-1) a_i >= 2 a_i a_j`.
    PairMixed,
    /// `C(a_0+d-2,d-1) a_j + C(a_j+d-1,d) >= 2 a_0 a_j`.
    PairLeading,
    /// `min(C(a_0+d-1,d), C(a_0+d-2,d-1) a_1) + C(a_1+d-1,d) >= 2 a_0 a_1`.
    PairTop,
}

impl InequalityId {
    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::TwoQuadricsMu3 => "two-quadrics-mu3",
            InequalityId::TwoQuadricsMu2 => "two-quadrics-mu2",
            InequalityId::OneQuadricSplit => "one-quadric-split",
            InequalityId::PairMixed => "pair-mixed",
            InequalityId::PairLeading => "pair-leading",
            InequalityId::PairTop => "pair-top",
        }
    }

    /// Strict (`<`/`>`) or not.
    pub fn is_strict(self) -> bool {
        matches!(
            self,
            InequalityId::TwoQuadricsMu3 | InequalityId::TwoQuadricsMu2 | InequalityId::OneQuadricSplit
        )
    }
}

/// One evaluated inequality, oriented so that `holds` means `lhs > rhs`
/// (strict) or `lhs >= rhs` (non-strict).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityCheck {
    pub id: InequalityId,
    pub lhs: ExactRational,
    pub rhs: ExactRational,
    pub holds: bool,
    /// For the pairwise family: the `(a_i, a_j)` attaining the worst margin.
    pub witness: Option<(u32, u32)>,
}

impl InequalityCheck {
    fn new(id: InequalityId, lhs: ExactRational, rhs: ExactRational, witness: Option<(u32, u32)>) -> Self {
        let holds = if id.is_strict() { lhs > rhs } else { lhs >= rhs };
        InequalityCheck { id, lhs, rhs, holds, witness }
    }

    pub fn margin(&self) -> ExactRational {
        &self.lhs - &self.rhs
    }
}

/// Lower bound on `C(n+d,d) - dim E` valid whenever two or more eigenvalues
/// occur: `(1/2)C(n+d-1,d-1) + (1/4)C(n+d-2,d-1) + (1/8)C(n+d-3,d-1)`.
pub fn two_eigenvalue_gap(n: i64, d: i64) -> ExactRational {
    int(binom(n + d - 1, d - 1)) * rat(1, 2)
        + int(binom(n + d - 2, d - 1)) * rat(1, 4)
        + int(binom(n + d - 3, d - 1)) * rat(1, 8)
}

/// Evaluate every elementary inequality at `(n, d)`.
///
/// The pairwise family is parametrised by multiplicities; it is reported at
/// the multiplicities (summing to at most `n+1`) minimising its margin.
pub fn elementary_inequalities(n: u32, d: u32) -> Vec<InequalityCheck> {
    let (ni, di) = (i64::from(n), i64::from(d));
    let mut out = Vec::with_capacity(6);

    let mu3_lhs =
        int(binom(ni + di - 1, di - 1)) * rat(2, 3) + int(binom(ni + di - 2, di - 1)) * rat(4, 9);
    let mu3_rhs = int(binom(ni + di - 2, ni) * 2 + 2);
    out.push(InequalityCheck::new(InequalityId::TwoQuadricsMu3, mu3_lhs, mu3_rhs, None));

    let gap = two_eigenvalue_gap(ni, di);
    let mu2_rhs = int(binom(ni + di - 2, ni) * 2);
    out.push(InequalityCheck::new(InequalityId::TwoQuadricsMu2, gap.clone(), mu2_rhs, None));

    // (b1 - b2 - 1/2) E + 2 b1 b2 < (b1 - 1/2) C(n+d,n) - b1 C(n+d-2,n) at
    // b1 = 1, b2 = 0 with E at its upper bound C(n+d,d) - gap, written as
    // rhs > lhs to keep the `lhs > rhs` orientation.
    let full = int(binom(ni + di, ni));
    let e_bound = &full - &gap;
    let split_small = e_bound * rat(1, 2);
    let split_big = &full * rat(1, 2) - int(binom(ni + di - 2, ni));
    out.push(InequalityCheck::new(InequalityId::OneQuadricSplit, split_big, split_small, None));

    let top = n + 1;
    let c_d1 = |a: u32| int(binom(i64::from(a) + di - 2, di - 1));
    let c_d = |a: u32| int(binom(i64::from(a) + di - 1, di));
    let worst = |id: InequalityId, pairs: &mut dyn Iterator<Item = (u32, u32)>, f: &dyn Fn(u32, u32) -> (ExactRational, ExactRational)| {
        let mut best: Option<InequalityCheck> = None;
        for (x, y) in pairs {
            let (l, r) = f(x, y);
            let cand = InequalityCheck::new(id, l, r, Some((x, y)));
            if best.as_ref().is_none_or(|b| cand.margin() < b.margin()) {
                best = Some(cand);
            }
        }
        best
    };
    let pairs = || (1..=top).flat_map(move |x| (1..=x.min(top - x)).map(move |y| (x, y)));

    if let Some(chk) = worst(InequalityId::PairMixed, &mut pairs(), &|x, y| {
        (c_d1(x) * int(y) + c_d1(y) * int(x), int(2 * x * y))
    }) {
        out.push(chk);
    }
    if let Some(chk) = worst(InequalityId::PairLeading, &mut pairs(), &|x, y| {
        (c_d1(x) * int(y) + c_d(y), int(2 * x * y))
    }) {
        out.push(chk);
    }
    if let Some(chk) = worst(InequalityId::PairTop, &mut pairs(), &|x, y| {
        let m = c_d(x).min(c_d1(x) * int(y));
        (m + c_d(y), int(2 * x * y))
    }) {
        out.push(chk);
    }
    out
}

/// Exact sign helper used by reports.
pub fn is_positive(x: &ExactRational) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binom_oracle(a: i64, b: i64) -> BigInt {
        // Multiplicative formula via factorials, independent of `binom`.
        if a < 0 || b < 0 || b > a {
            return BigInt::zero();
        }
        let fact = |k: i64| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
        fact(a) / (fact(b) * fact(a - b))
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(7, 3), BigInt::from(35));
        assert_eq!(binom(4, 0), BigInt::from(1));
        assert_eq!(binom(3, 5), BigInt::zero());
        assert_eq!(binom(-2, 1), BigInt::zero());
        assert_eq!(binom(0, 0), BigInt::one());
    }

    #[test]
    fn binom_u128_agrees_with_bigint() {
        for a in -3..70 {
            for b in -3..72 {
                assert_eq!(BigInt::from(binom_u128(a, b)), binom(a, b), "C({a},{b})");
            }
        }
    }

    #[test]
    fn binom_matches_factorial_oracle() {
        for a in -4..40 {
            for b in -4..44 {
                assert_eq!(binom(a, b), binom_oracle(a, b));
            }
        }
    }

    #[test]
    fn dim_forms_examples_and_brute_force() {
        assert_eq!(dim_forms(3, 3), BigInt::from(20));
        assert_eq!(dim_forms(4, 2), BigInt::from(15));
        assert_eq!(dim_forms(0, 9), BigInt::from(1));
        fn count(vars: u32, d: u32) -> u64 {
            if vars == 1 {
                return 1;
            }
            (0..=d).map(|k| count(vars - 1, d - k)).sum()
        }
        for n in 0..=10 {
            for d in 0..=10 {
                assert_eq!(dim_forms(n, d), BigInt::from(count(n + 1, d)), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn citype_validation() {
        assert!(CIType::new(3, vec![3]).is_ok());
        assert!(CIType::new(2, vec![2, 2]).is_err());
        assert!(CIType::new(4, vec![1, 3]).is_err());
        assert!(CIType::new(4, Vec::new()).is_err());
        let ci = CIType::new(6, vec![3, 2]).unwrap();
        assert_eq!(ci.degrees(), &[2, 3]);
        assert_eq!(ci.to_string(), "(6,2,3)");
        assert_eq!(ci.dim(), 4);
    }

    #[test]
    fn enumerate_counts() {
        let all = CIType::enumerate(3..=4, 2, 3);
        // n=3: c=1 {2,3}, c=2 {22,23,33}; n=4: same five.
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn h0_examples() {
        let h = |n, degs: &[u32], d| h0_restricted(&CIType::new(n, degs.to_vec()).unwrap(), d).unwrap();
        assert_eq!(h(4, &[2, 2], 2), BigInt::from(13));
        assert_eq!(h(5, &[3, 3], 3), BigInt::from(54));
        // C(9,6) - C(7,6) - 1: the cubic plus the quadric times linear forms.
        assert_eq!(h(6, &[2, 3], 3), BigInt::from(76));
        assert_eq!(h(7, &[2, 2, 3], 3), BigInt::from(103));
        assert_eq!(h(7, &[2, 2, 3], 2), BigInt::from(34));
    }

    #[test]
    fn h0_rejects_missing_degree_and_unknown_pattern() {
        let ci = CIType::new(6, vec![3, 3]).unwrap();
        assert!(matches!(h0_restricted(&ci, 4), Err(CombinatError::DegreeNotPresent { .. })));
        let ci = CIType::new(7, vec![2, 3, 4]).unwrap();
        assert!(matches!(h0_restricted(&ci, 4), Err(CombinatError::UnsupportedPattern { .. })));
        let ci = CIType::new(7, vec![2, 2, 2, 3]).unwrap();
        assert!(matches!(h0_restricted(&ci, 3), Err(CombinatError::UnsupportedPattern { .. })));
    }

    #[test]
    fn inequality_examples() {
        let at = |n, d, id| elementary_inequalities(n, d).into_iter().find(|c| c.id == id).unwrap();
        let mu3 = at(4, 3, InequalityId::TwoQuadricsMu3);
        assert_eq!(mu3.lhs, rat(130, 9));
        assert_eq!(mu3.rhs, int(12));
        assert!(mu3.holds);
        // (1/2)15 + (1/4)10 + (1/8)6 = 43/4.
        let mu2 = at(4, 3, InequalityId::TwoQuadricsMu2);
        assert_eq!(mu2.lhs, rat(43, 4));
        assert_eq!(mu2.rhs, int(10));
        assert!(mu2.holds);
        assert!(!at(3, 2, InequalityId::TwoQuadricsMu3).holds);
    }

    /// The closing inequalities are claimed for all d >= 3, n >= 4 but fail
    /// once d is large relative to n. These are the exact failures in the
    /// box n in [4,20], d in [3,9]; the certify engine does not depend on
    /// them because it evaluates the unreduced inequalities directly.
    #[test]
    fn closing_inequalities_failure_set_is_frozen() {
        let mut mu3_fail = Vec::new();
        let mut mu2_fail = Vec::new();
        for n in 4..=20 {
            for d in 3..=9 {
                for chk in elementary_inequalities(n, d) {
                    match chk.id {
                        InequalityId::TwoQuadricsMu3 if !chk.holds => mu3_fail.push((n, d)),
                        InequalityId::TwoQuadricsMu2 if !chk.holds => mu2_fail.push((n, d)),
                        _ => {}
                    }
                }
            }
        }
        assert!(mu3_fail.contains(&(4, 5)));
        assert!(mu2_fail.contains(&(4, 5)) && mu2_fail.contains(&(5, 4)));
        // Failures only for d large relative to n: monotone in d.
        for &(n, d) in mu3_fail.iter().chain(&mu2_fail) {
            assert!(d >= 4, "unexpected small-degree failure at n={n} d={d}");
        }
        for (n, d) in mu2_fail.clone() {
            for d2 in d..=9 {
                assert!(mu2_fail.contains(&(n, d2)));
            }
        }
        // The split inequality is algebraically the same statement as mu2.
        for n in 4..=20 {
            for d in 3..=9 {
                let all = elementary_inequalities(n, d);
                let get = |id| all.iter().find(|c| c.id == id).unwrap().holds;
                assert_eq!(get(InequalityId::TwoQuadricsMu2), get(InequalityId::OneQuadricSplit));
            }
        }
    }

    #[test]
    fn pairwise_family_holds_for_cubics_and_up() {
        for n in 1..=14 {
            for d in 3..=9 {
                for chk in elementary_inequalities(n, d) {
                    if !chk.id.is_strict() {
                        assert!(chk.holds, "{:?} at n={n} d={d}: {:?}", chk.id, chk.witness);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn pascal_identity(a in -64i64..=64, b in -64i64..=64) {
            if a >= 1 {
                prop_assert_eq!(binom(a, b), binom(a - 1, b - 1) + binom(a - 1, b));
            }
        }

        #[test]
        fn rationals_stay_reduced(p in -1000i64..1000, q in 1i64..1000) {
            let x = rat(p, q);
            prop_assert!(x.denom().is_positive());
            let g = num_integer::Integer::gcd(x.numer(), x.denom());
            prop_assert!(g.is_one());
        }
    }
}
