//! Intersections of two diagonal quadrics `Σ z_i^2 = Σ λ_i z_i^2 = 0`.
//!
//! The sign changes `z_i -> ±z_i` preserve both forms; modulo `±1` they give
//! `(Z/2)^n`. Any further automorphism permutes the `λ_i` through a Möbius
//! map of the pencil parameter, which the triple check rules out.

use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use super::linalg::{rank, RowSpace};
use super::poly::{monomial_index, HPoly};
use super::VarietyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilReport {
    pub q: u64,
    pub eigenvalues: Vec<u64>,
    pub n: usize,
    pub sign_maps: u64,
    pub sign_maps_preserving: u64,
    /// Sign maps acting as a scalar (expected: `±1` only).
    pub scalar_sign_maps: u64,
    pub group_order: u64,
    /// Nonidentity Möbius maps permuting the eigenvalues.
    pub mobius_symmetries: Vec<[u64; 4]>,
}

impl PencilReport {
    pub fn ok(&self) -> bool {
        self.sign_maps_preserving == self.sign_maps && self.group_order == 1 << self.n && self.mobius_symmetries.is_empty()
    }
}

pub fn pencil_automorphisms(eigenvalues: &[u64], field: PrimeField) -> Result<PencilReport, VarietyError> {
    if field.q() == 2 {
        return Err(VarietyError::CharacteristicTwo);
    }
    let lam: Vec<u64> = eigenvalues.iter().map(|&x| x % field.q()).collect();
    let mut sorted = lam.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != lam.len() {
        return Err(VarietyError::RepeatedEigenvalues);
    }
    if lam.len() < 5 {
        return Err(VarietyError::DimensionMismatch(format!("need n + 1 >= 5 eigenvalues, got {}", lam.len())));
    }
    let nvars = lam.len();
    let n = nvars - 1;
    let ones: Vec<i64> = vec![1; nvars];
    let q0 = HPoly::diagonal(field, 2, &ones);
    let q1 = HPoly::diagonal(field, 2, &lam.iter().map(|&x| x as i64).collect::<Vec<_>>());
    let index = monomial_index(nvars, 2);
    let mut pencil = RowSpace::new(field, index.len());
    pencil.insert(q0.to_vector(&index));
    pencil.insert(q1.to_vector(&index));

    let total = 1u64 << nvars;
    let mut preserving = 0;
    let mut scalar = 0;
    let mut classes = std::collections::BTreeSet::new();
    for mask in 0..total {
        let signs: Vec<u64> = (0..nvars).map(|i| if mask >> i & 1 == 1 { field.q() - 1 } else { 1 }).collect();
        let m: Vec<Vec<u64>> = (0..nvars).map(|i| (0..nvars).map(|j| if i == j { signs[i] } else { 0 }).collect()).collect();
        let images = [q0.substitute(field, &m), q1.substitute(field, &m)];
        let rows: Vec<Vec<u64>> = images.iter().map(|g| g.to_vector(&index)).collect();
        if rows.iter().all(|r| pencil.contains(r)) && rank(field, &rows) == 2 {
            preserving += 1;
        }
        if signs.iter().all(|&s| s == signs[0]) {
            scalar += 1;
        }
        // Projective class: normalize the first sign to +1.
        let class: Vec<bool> = signs.iter().map(|&s| s != signs[0]).collect();
        classes.insert(class);
    }
    Ok(PencilReport {
        q: field.q(),
        eigenvalues: lam.clone(),
        n,
        sign_maps: total,
        sign_maps_preserving: preserving,
        scalar_sign_maps: scalar,
        group_order: classes.len() as u64,
        mobius_symmetries: mobius_symmetries(field, &lam),
    })
}

/// Matrix `[a, b; c, d]` acting by `x -> (ax + b)/(cx + d)`.
type Mobius = [u64; 4];

fn compose(f: PrimeField, m: Mobius, k: Mobius) -> Mobius {
    [
        f.add(f.mul(m[0], k[0]), f.mul(m[1], k[2])),
        f.add(f.mul(m[0], k[1]), f.mul(m[1], k[3])),
        f.add(f.mul(m[2], k[0]), f.mul(m[3], k[2])),
        f.add(f.mul(m[2], k[1]), f.mul(m[3], k[3])),
    ]
}

/// Sends `x0, x1, x2` to `0, ∞, 1`.
fn to_standard(f: PrimeField, x: [u64; 3]) -> Mobius {
    let s = f.sub(x[2], x[1]);
    let t = f.sub(x[2], x[0]);
    [s, f.neg(f.mul(x[0], s)), t, f.neg(f.mul(x[1], t))]
}

fn adjugate(f: PrimeField, m: Mobius) -> Mobius {
    [m[3], f.neg(m[1]), f.neg(m[2]), m[0]]
}

fn apply(f: PrimeField, m: Mobius, x: u64) -> Option<u64> {
    let den = f.add(f.mul(m[2], x), m[3]);
    (den != 0).then(|| f.mul(f.add(f.mul(m[0], x), m[1]), f.inv(den)))
}

/// Every Möbius map sending the eigenvalue set to itself, other than the
/// identity, found by fixing the images of the first three eigenvalues.
pub fn mobius_symmetries(field: PrimeField, lam: &[u64]) -> Vec<Mobius> {
    let src = to_standard(field, [lam[0], lam[1], lam[2]]);
    let mut out = Vec::new();
    for a in 0..lam.len() {
        for b in 0..lam.len() {
            for c in 0..lam.len() {
                if a == b || b == c || a == c || (a, b, c) == (0, 1, 2) {
                    continue;
                }
                let dst = to_standard(field, [lam[a], lam[b], lam[c]]);
                let m = compose(field, adjugate(field, dst), src);
                let maps_in = lam.iter().all(|&x| apply(field, m, x).is_some_and(|y| lam.contains(&y)));
                if maps_in {
                    out.push(m);
                }
            }
        }
    }
    out
}
