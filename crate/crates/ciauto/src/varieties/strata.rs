//! Points, linear subspaces, Jacobians and rank strata by enumeration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exec::Exec;

use super::field::PrimeField;
use super::linalg::{kernel, rank, RowSpace};
use super::poly::HPoly;
use super::VarietyError;

/// Scale so the first nonzero coordinate is 1; `None` for the zero vector.
pub fn normalize(field: PrimeField, p: &[u64]) -> Option<Vec<u64>> {
    let lead = *p.iter().find(|&&x| x != 0)?;
    let inv = field.inv(lead);
    Some(p.iter().map(|&x| field.mul(x, inv)).collect())
}

/// Projective points, normalized and without duplicates, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<Vec<u64>>,
}

impl PointSet {
    pub fn from_points(field: PrimeField, pts: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut points: Vec<Vec<u64>> = pts.into_iter().filter_map(|p| normalize(field, &p)).collect();
        points.sort();
        points.dedup();
        PointSet { points }
    }

    /// The coordinate points `p_0..p_n`.
    pub fn coordinate_points(nvars: usize) -> Self {
        PointSet {
            points: (0..nvars)
                .map(|i| (0..nvars).map(|j| u64::from(i == j)).collect())
                .rev()
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, field: PrimeField, p: &[u64]) -> bool {
        normalize(field, p).is_some_and(|p| self.points.binary_search(&p).is_ok())
    }
}

/// Linear subspace cut out by row-reduced linear forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSubspace {
    pub nvars: usize,
    pub forms: Vec<Vec<u64>>,
}

impl LinearSubspace {
    pub fn whole(nvars: usize) -> Self {
        LinearSubspace { nvars, forms: Vec::new() }
    }

    /// Cut out by `forms`, reduced to an independent set.
    pub fn from_forms(field: PrimeField, nvars: usize, forms: &[Vec<u64>]) -> Self {
        let mut space = RowSpace::new(field, nvars);
        let mut kept = Vec::new();
        for f in forms {
            if space.insert(f.clone()) {
                kept.push(f.clone());
            }
        }
        LinearSubspace { nvars, forms: kept }
    }

    /// Spanned by the given points.
    pub fn span(field: PrimeField, nvars: usize, points: &[Vec<u64>]) -> Self {
        let forms = kernel(field, points, nvars);
        LinearSubspace::from_forms(field, nvars, &forms)
    }

    pub fn dim(&self) -> i64 {
        self.nvars as i64 - self.forms.len() as i64 - 1
    }

    /// Basis of the affine cone, one vector per row.
    pub fn basis(&self, field: PrimeField) -> Vec<Vec<u64>> {
        kernel(field, &self.forms, self.nvars)
    }

    pub fn contains(&self, field: PrimeField, p: &[u64]) -> bool {
        self.forms.iter().all(|f| f.iter().zip(p).fold(0, |a, (&x, &y)| field.add(a, field.mul(x, y))) == 0)
    }

    pub fn point_count(&self, field: PrimeField) -> u128 {
        projective_count(field.q(), self.dim())
    }

    /// Every rational point, normalized; fails above `budget`.
    pub fn points(&self, field: PrimeField, budget: u128) -> Result<Vec<Vec<u64>>, VarietyError> {
        let basis = self.basis(field);
        let k = basis.len();
        let total = self.point_count(field);
        if total > budget {
            return Err(VarietyError::BudgetExceeded { needed: total, budget });
        }
        Ok((0..total)
            .filter_map(|i| normalize(field, &combine(field, &basis, &projective_point(field.q(), k, i))))
            .collect())
    }
}

/// `#P^k(F_q)`, zero for `k < 0`.
pub fn projective_count(q: u64, k: i64) -> u128 {
    (0..=k).map(|e| u128::from(q).pow(e as u32)).sum()
}

/// The `idx`-th normalized point of `P^{k-1}` (k coordinates): grouped by
/// position of the leading 1, remaining coordinates in base `q`.
pub fn projective_point(q: u64, k: usize, mut idx: u128) -> Vec<u64> {
    let q128 = u128::from(q);
    for lead in 0..k {
        let free = (k - lead - 1) as u32;
        let block = q128.pow(free);
        if idx < block {
            let mut p = vec![0; k];
            p[lead] = 1;
            for j in (lead + 1..k).rev() {
                p[j] = (idx % q128) as u64;
                idx /= q128;
            }
            return p;
        }
        idx -= block;
    }
    panic!("point index out of range");
}

fn combine(field: PrimeField, basis: &[Vec<u64>], coeffs: &[u64]) -> Vec<u64> {
    let n = basis.first().map_or(0, Vec::len);
    let mut v = vec![0; n];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            for (x, &y) in v.iter_mut().zip(b) {
                *x = field.add(*x, field.mul(c, y));
            }
        }
    }
    v
}

/// `(∂F_i/∂z_j)`, `c × (n+1)`.
pub fn jacobian_matrix(field: PrimeField, forms: &[HPoly]) -> Vec<Vec<HPoly>> {
    forms.iter().map(|f| (0..f.nvars()).map(|j| f.partial(field, j)).collect()).collect()
}

pub fn eval_matrix(field: PrimeField, m: &[Vec<HPoly>], p: &[u64]) -> Vec<Vec<u64>> {
    m.iter().map(|row| row.iter().map(|g| g.eval(field, p)).collect()).collect()
}

/// Rational points of `X ∩ Λ` bucketed by the rank drop `r = c - rank` of
/// the Jacobian restricted to `Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strata {
    pub q: u64,
    pub dim_lambda: i64,
    pub enumerated: u128,
    pub on_x: usize,
    pub by_corank: BTreeMap<usize, PointSet>,
}

impl Strata {
    /// Points with `r >= 1`.
    pub fn singular(&self) -> Vec<Vec<u64>> {
        let mut pts: Vec<Vec<u64>> = self.by_corank.iter().filter(|(r, _)| **r >= 1).flat_map(|(_, s)| s.points.clone()).collect();
        pts.sort();
        pts
    }
}

const CHUNK: u128 = 1 << 14;

pub fn strata(
    field: PrimeField,
    forms: &[HPoly],
    lambda: &LinearSubspace,
    budget: u128,
    exec: Exec,
) -> Result<Strata, VarietyError> {
    let total = lambda.point_count(field);
    if total > budget {
        return Err(VarietyError::BudgetExceeded { needed: total, budget });
    }
    let basis = lambda.basis(field);
    let k = basis.len();
    let jac = jacobian_matrix(field, forms);
    let c = forms.len();
    let chunks: Vec<(u128, u128)> = (0..total.div_ceil(CHUNK)).map(|i| (i * CHUNK, ((i + 1) * CHUNK).min(total))).collect();
    let found = exec.map(chunks, |(lo, hi)| {
        let mut out = Vec::new();
        for i in lo..hi {
            let p = combine(field, &basis, &projective_point(field.q(), k, i));
            if forms.iter().any(|f| f.eval(field, &p) != 0) {
                continue;
            }
            let j = eval_matrix(field, &jac, &p);
            // Restrict each gradient to Λ's cone.
            let restricted: Vec<Vec<u64>> = j
                .iter()
                .map(|row| basis.iter().map(|b| row.iter().zip(b).fold(0, |a, (&x, &y)| field.add(a, field.mul(x, y)))).collect())
                .collect();
            let r = c - rank(field, &restricted);
            out.push((r, p));
        }
        out
    });
    let mut by: BTreeMap<usize, Vec<Vec<u64>>> = BTreeMap::new();
    let mut on_x = 0;
    for (r, p) in found.into_iter().flatten() {
        on_x += 1;
        by.entry(r).or_default().push(p);
    }
    Ok(Strata {
        q: field.q(),
        dim_lambda: lambda.dim(),
        enumerated: total,
        on_x,
        by_corank: by.into_iter().map(|(r, pts)| (r, PointSet::from_points(field, pts))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varieties::linalg::{inverse, mat_vec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    pub(crate) fn cayley(field: PrimeField) -> HPoly {
        HPoly::from_terms(field, 4, 3, [(vec![1, 1, 1, 0], 1), (vec![1, 1, 0, 1], 1), (vec![1, 0, 1, 1], 1), (vec![0, 1, 1, 1], 1)])
    }

    #[test]
    fn enumeration_counts() {
        let q = f(5);
        let pts = LinearSubspace::whole(4).points(q, 1000).unwrap();
        assert_eq!(pts.len(), 156);
        let set = PointSet::from_points(q, pts.clone());
        assert_eq!(set.len(), 156);
        let plane = LinearSubspace::from_forms(q, 4, &[vec![1, 1, 0, 0], vec![2, 2, 0, 0]]);
        assert_eq!(plane.dim(), 2);
        assert!(plane.points(q, 1000).unwrap().iter().all(|p| plane.contains(q, p)));
        assert!(matches!(LinearSubspace::whole(4).points(q, 10), Err(VarietyError::BudgetExceeded { .. })));
    }

    #[test]
    fn fermat_quadric_smooth() {
        let q = f(5);
        let s = strata(q, &[HPoly::diagonal(q, 2, &[1, 1, 1, 1])], &LinearSubspace::whole(4), 1000, Exec::Sequential).unwrap();
        assert!(s.on_x > 0 && s.singular().is_empty());
    }

    #[test]
    fn cayley_nodes() {
        let q = f(101);
        let s = strata(q, &[cayley(q)], &LinearSubspace::whole(4), 2_000_000, Exec::Parallel).unwrap();
        assert_eq!(s.singular(), PointSet::coordinate_points(4).points);
        assert_eq!(s.by_corank[&1].len(), 4);
    }

    #[test]
    fn cone_vertex() {
        let q = f(7);
        let cone = HPoly::from_terms(q, 4, 2, [(vec![1, 1, 0, 0], 1), (vec![0, 0, 2, 0], -1)]);
        let s = strata(q, &[cone], &LinearSubspace::whole(4), 1000, Exec::Sequential).unwrap();
        assert_eq!(s.singular(), vec![vec![0, 0, 0, 1]]);
    }

    #[test]
    fn strata_invariant_under_coordinate_change() {
        let q = f(11);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = cayley(q);
        for _ in 0..3 {
            let m: Vec<Vec<u64>> = loop {
                let m: Vec<Vec<u64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(0..11)).collect()).collect();
                if inverse(q, &m).is_some() {
                    break m;
                }
            };
            let y = x.substitute(q, &m);
            let sx = strata(q, std::slice::from_ref(&x), &LinearSubspace::whole(4), 10_000, Exec::Sequential).unwrap();
            let sy = strata(q, &[y], &LinearSubspace::whole(4), 10_000, Exec::Sequential).unwrap();
            // Singular points of F(Mz) are M^{-1} of those of F.
            let mapped = PointSet::from_points(q, sy.singular().iter().map(|p| mat_vec(q, &m, p)));
            assert_eq!(mapped.points, sx.singular());
            assert_eq!(sx.on_x, sy.on_x);
        }
    }
}
