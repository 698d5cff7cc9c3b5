//! The `(2,2)` complete intersection `D ∩ E` in `P^{n-1}` with
//! `D = Σ z_i^2`, `E = Σ η^i z_i^2` (indices in `Z/n`) and the cyclic map
//! `σ : z_i -> η^{1/2} z_{i+1}`.
//!
//! Substituting, `D -> Σ η z_{i+1}^2 = η D` and
//! `E -> Σ η^i η z_{i+1}^2 = Σ η^{i+1} z_{i+1}^2 = E`, so `σ` preserves both.
//! `η^{1/2}` is taken as `ζ` with `ζ` a primitive `2n`-th root of unity and
//! `η = ζ^2`, so the field must satisfy `2n | q - 1`.

use serde::Serialize;

use crate::exec::Exec;

use super::field::PrimeField;
use super::poly::HPoly;
use super::strata::{strata, LinearSubspace};
use super::VarietyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicReport {
    pub n: usize,
    pub q: u64,
    pub eta: u64,
    pub sqrt_eta: u64,
    pub d: HPoly,
    pub e: HPoly,
    /// `σ^* D` equals the displayed `Σ η z_{i+1}^2`, and that equals `η D`.
    pub d_identity: bool,
    pub d_is_eta_multiple: bool,
    /// `σ^* E` equals the displayed `Σ η^i η z_{i+1}^2`, and that equals `E`.
    pub e_identity: bool,
    pub e_is_fixed: bool,
    /// Singular rational points of `D ∩ E`, when enumerated.
    pub singular_points: Option<usize>,
}

impl CyclicReport {
    pub fn ok(&self) -> bool {
        self.d_identity && self.d_is_eta_multiple && self.e_identity && self.e_is_fixed && self.singular_points.unwrap_or(0) == 0
    }
}

pub fn cyclic_22_example(n: usize, field: PrimeField, smoothness_budget: Option<u128>) -> Result<CyclicReport, VarietyError> {
    if n < 2 || (n as u64).is_multiple_of(field.q()) {
        return Err(VarietyError::DimensionMismatch(format!("n = {n} must be >= 2 and prime to q = {}", field.q())));
    }
    if field.q() == 2 {
        return Err(VarietyError::CharacteristicTwo);
    }
    let zeta = field.root_of_unity(2 * n as u64).ok_or(VarietyError::NoRootOfUnity { k: 2 * n as u64, q: field.q() })?;
    let eta = field.mul(zeta, zeta);
    let eta_pow = |i: usize| field.pow(eta, i as u64);
    let d = HPoly::diagonal(field, 2, &vec![1; n]);
    let e = HPoly::diagonal(field, 2, &(0..n).map(|i| eta_pow(i) as i64).collect::<Vec<_>>());
    // σ as a substitution matrix: row i sends z_i to ζ z_{i+1}.
    let sigma: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| if j == (i + 1) % n { zeta } else { 0 }).collect()).collect();
    let square = |j: usize| {
        let mut m = vec![0; n];
        m[j] = 2;
        m
    };
    let d_display = HPoly::from_terms(field, n, 2, (0..n).map(|i| (square((i + 1) % n), eta as i64)));
    let e_display =
        HPoly::from_terms(field, n, 2, (0..n).map(|i| (square((i + 1) % n), field.mul(eta_pow(i), eta) as i64)));
    let sd = d.substitute(field, &sigma);
    let se = e.substitute(field, &sigma);
    let singular_points = match smoothness_budget {
        Some(budget) => Some(strata(field, &[d.clone(), e.clone()], &LinearSubspace::whole(n), budget, Exec::Parallel)?.singular().len()),
        None => None,
    };
    Ok(CyclicReport {
        n,
        q: field.q(),
        eta,
        sqrt_eta: zeta,
        d_identity: sd == d_display,
        d_is_eta_multiple: d_display == d.scale(field, eta),
        e_identity: se == e_display,
        e_is_fixed: e_display == e,
        d,
        e,
        singular_points,
    })
}
