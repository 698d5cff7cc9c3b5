//! Chord sets and linear projections over a finite field.
//!
//! Dimensions read off point counts are estimates: a variety of dimension
//! `k` has about `q^k` rational points, which is evidence, not proof.

use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use super::linalg::{inverse, mat_vec, RowSpace};
use super::strata::{normalize, LinearSubspace, PointSet};
use super::VarietyError;

/// Points of every line `ab`, `a ∈ A`, `b ∈ B`, `a != b`.
pub fn chord_set(field: PrimeField, a: &PointSet, b: &PointSet) -> PointSet {
    let mut pts = Vec::new();
    for x in &a.points {
        for y in &b.points {
            if x == y {
                continue;
            }
            pts.push(y.clone());
            for t in 0..field.q() {
                pts.push(x.iter().zip(y).map(|(&u, &v)| field.add(u, field.mul(t, v))).collect());
            }
        }
    }
    PointSet::from_points(field, pts)
}

/// Projection from `Λ` onto a complementary `Λ'`.
#[derive(Clone, Debug)]
pub struct Projection {
    field: PrimeField,
    /// Inverse of `[basis Λ | basis Λ']` (as columns).
    inv: Vec<Vec<u64>>,
    center_dim: usize,
    target_basis: Vec<Vec<u64>>,
}

impl Projection {
    pub fn new(field: PrimeField, center: &LinearSubspace, target: &LinearSubspace) -> Result<Self, VarietyError> {
        let n = center.nvars;
        if center.dim() + target.dim() != n as i64 - 2 {
            return Err(VarietyError::DimensionMismatch(format!(
                "dim Λ + dim Λ' = {} in P^{}, need {}",
                center.dim() + target.dim(),
                n - 1,
                n as i64 - 2
            )));
        }
        let cb = center.basis(field);
        let tb = target.basis(field);
        let mut span = RowSpace::new(field, n);
        for v in cb.iter().chain(&tb) {
            span.insert(v.clone());
        }
        if span.dim() < n {
            return Err(VarietyError::NotDisjoint);
        }
        let cols: Vec<Vec<u64>> = cb.iter().chain(&tb).cloned().collect();
        let m: Vec<Vec<u64>> = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let inv = inverse(field, &m).ok_or(VarietyError::NotDisjoint)?;
        Ok(Projection { field, inv, center_dim: cb.len(), target_basis: tb })
    }

    /// `None` for points of the centre.
    pub fn apply(&self, p: &[u64]) -> Option<Vec<u64>> {
        let f = self.field;
        let coords = mat_vec(f, &self.inv, p);
        let t = &coords[self.center_dim..];
        if t.iter().all(|&x| x == 0) {
            return None;
        }
        let n = p.len();
        let mut v = vec![0; n];
        for (b, &c) in self.target_basis.iter().zip(t) {
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        normalize(f, &v)
    }

    pub fn image(&self, s: &PointSet) -> PointSet {
        PointSet::from_points(self.field, s.points.iter().filter_map(|p| self.apply(p)))
    }
}

/// `round(log_q count)`, or `-1` for no points.
pub fn dim_estimate(q: u64, count: usize) -> i64 {
    if count == 0 {
        return -1;
    }
    ((count as f64).ln() / (q as f64).ln()).round() as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordReport {
    pub q: u64,
    pub chord_points: usize,
    pub chord_dim_estimate: i64,
    pub image_points: usize,
    pub image_dim_estimate: i64,
    pub label: String,
}

pub fn chord_and_projection(
    field: PrimeField,
    a: &PointSet,
    b: &PointSet,
    center: &LinearSubspace,
    target: &LinearSubspace,
) -> Result<ChordReport, VarietyError> {
    let proj = Projection::new(field, center, target)?;
    let chord = chord_set(field, a, b);
    let image = proj.image(a);
    Ok(ChordReport {
        q: field.q(),
        chord_points: chord.len(),
        chord_dim_estimate: dim_estimate(field.q(), chord.len()),
        image_points: image.len(),
        image_dim_estimate: dim_estimate(field.q(), image.len()),
        label: format!("point-count evidence over F_{}", field.q()),
    })
}

/// Points of `F = 0` inside `Λ` and the estimated dimension, to compare
/// against `max(dim X / 2, dim Λ - c)`.
pub fn section_dim_evidence(
    field: PrimeField,
    forms: &[super::poly::HPoly],
    lambda: &LinearSubspace,
    budget: u128,
) -> Result<(usize, i64), VarietyError> {
    let pts = lambda.points(field, budget)?;
    let count = pts.iter().filter(|p| forms.iter().all(|f| f.eval(field, p) == 0)).count();
    Ok((count, dim_estimate(field.q(), count)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::varieties::poly::HPoly;
    use crate::varieties::strata::strata;

    #[test]
    fn chords_of_two_points_and_a_third() {
        let q = PrimeField::new(7).unwrap();
        let a = PointSet::from_points(q, [vec![1, 0, 0], vec![0, 1, 0]]);
        let b = PointSet::from_points(q, [vec![0, 0, 1]]);
        let c = chord_set(q, &a, &b);
        // Two lines through (0:0:1), each with q + 1 points, sharing it.
        assert_eq!(c.len(), 2 * 8 - 1);
        assert!(c.points.iter().all(|p| p[0] == 0 || p[1] == 0));
    }

    #[test]
    fn projection_checks() {
        let q = PrimeField::new(11).unwrap();
        let point = LinearSubspace::span(q, 4, &[vec![1, 2, 3, 4]]);
        let plane = LinearSubspace::from_forms(q, 4, &[vec![1, 0, 0, 0]]);
        assert!(Projection::new(q, &point, &plane).is_ok());
        let bad = LinearSubspace::span(q, 4, &[vec![0, 1, 0, 0]]);
        assert!(matches!(Projection::new(q, &bad, &plane), Err(VarietyError::NotDisjoint)));
        assert!(matches!(Projection::new(q, &point, &LinearSubspace::whole(4)), Err(VarietyError::DimensionMismatch(_))));
    }

    #[test]
    fn cayley_projects_onto_plane() {
        let q = PrimeField::new(11).unwrap();
        let cayley = HPoly::from_terms(q, 4, 3, crate::varieties::nodes::multiplicity_span(4, 3, 2).into_iter().map(|m| (m, 1)));
        let s = strata(q, &[cayley], &LinearSubspace::whole(4), 10_000, Exec::Sequential).unwrap();
        let x = PointSet::from_points(q, s.by_corank.values().flat_map(|p| p.points.clone()));
        let center = LinearSubspace::span(q, 4, &[vec![1, 2, 5, 7]]);
        let target = LinearSubspace::from_forms(q, 4, &[vec![1, 1, 1, 3]]);
        let r = chord_and_projection(q, &x, &PointSet::from_points(q, [vec![1, 2, 5, 7]]), &center, &target).unwrap();
        assert_eq!(r.image_dim_estimate, 2);
    }
}
