//! Whether a diagonal automorphism can act trivially on the cokernel of the
//! Jacobian map `J_X : H^0(T_P|_X) -> ⊕ H^0(O_X(d_i))`.
//!
//! `σ` acts trivially on `coker J_X` iff `Im J_X + ⊕ E_{X,d_i,ξ_i}` fills
//! `⊕ H^0(O_X(d_i))`, where `ξ_i` is the eigenvalue of `F_i`. Everything is
//! computed in `⊕ (S/(F))_{d_i}` on monomial bases.

use serde::{Deserialize, Serialize};

use crate::eigencalc::EigenSpec;

use super::field::PrimeField;
use super::ideal::QuotientPiece;
use super::linalg::RowSpace;
use super::poly::{monomials, HPoly};
use super::VarietyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CokernelReport {
    pub q: u64,
    pub spec: EigenSpec,
    pub degrees: Vec<u32>,
    /// Weight of each `F_i`.
    pub eigen_weights: Vec<u32>,
    pub h0_sum: usize,
    pub image_dim: usize,
    pub with_eigenspaces_dim: usize,
    pub shortfall: usize,
    /// Two quadrics: the pencil case, where no shortfall is expected.
    pub pencil_exception: bool,
}

fn weight(spec: &EigenSpec, m: &[u32]) -> u32 {
    let p = spec.p();
    m.iter().zip(spec.weights()).map(|(&e, &w)| e * w % p).sum::<u32>() % p
}

pub fn fixed_cokernel_test(forms: &[HPoly], spec: &EigenSpec, field: PrimeField) -> Result<CokernelReport, VarietyError> {
    spec.require_nontrivial()?;
    let nvars = spec.weights().len();
    if forms.iter().any(|f| f.nvars() != nvars) {
        return Err(VarietyError::DimensionMismatch(format!("forms in {} variables, spec has {nvars}", forms[0].nvars())));
    }
    if !(field.q() - 1).is_multiple_of(u64::from(spec.p())) {
        return Err(VarietyError::NoRootOfUnity { k: u64::from(spec.p()), q: field.q() });
    }
    let mut eigen_weights = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        let ws: Vec<u32> = f.terms().map(|(m, _)| weight(spec, m)).collect();
        match ws.first() {
            Some(&w) if ws.iter().all(|&x| x == w) => eigen_weights.push(w),
            _ => return Err(VarietyError::NotEigenvector(i)),
        }
    }
    let pieces: Vec<QuotientPiece> = forms.iter().map(|f| QuotientPiece::new(field, forms, nvars, f.degree())).collect();
    let offsets: Vec<usize> = pieces
        .iter()
        .scan(0, |acc, p| {
            let o = *acc;
            *acc += p.index.len();
            Some(o)
        })
        .collect();
    let total: usize = pieces.iter().map(|p| p.index.len()).sum();
    let embed = |block: usize, v: Vec<u64>| {
        let mut out = vec![0; total];
        out[offsets[block]..offsets[block] + v.len()].copy_from_slice(&v);
        out
    };
    let mut space = RowSpace::new(field, total);
    for (b, piece) in pieces.iter().enumerate() {
        for row in piece.ideal.rows() {
            space.insert(embed(b, row.to_vec()));
        }
    }
    let base = space.dim();
    let h0_sum = total - base;

    for j in 0..nvars {
        let partials: Vec<HPoly> = forms.iter().map(|f| f.partial(field, j)).collect();
        for k in 0..nvars {
            let mut e = vec![0; nvars];
            e[k] = 1;
            let mut v = vec![0; total];
            for (b, d) in partials.iter().enumerate() {
                let col = d.mul_monomial(field, &e).to_vector(&pieces[b].index);
                v[offsets[b]..offsets[b] + col.len()].copy_from_slice(&col);
            }
            space.insert(v);
        }
    }
    let image_dim = space.dim() - base;
    for (b, piece) in pieces.iter().enumerate() {
        for m in monomials(nvars, piece.degree) {
            if weight(spec, &m) == eigen_weights[b] {
                let mut v = vec![0; piece.index.len()];
                v[piece.index[&m]] = 1;
                space.insert(embed(b, v));
            }
        }
    }
    let with_eigenspaces_dim = space.dim() - base;
    Ok(CokernelReport {
        q: field.q(),
        spec: spec.clone(),
        degrees: forms.iter().map(HPoly::degree).collect(),
        eigen_weights,
        h0_sum,
        image_dim,
        with_eigenspaces_dim,
        shortfall: h0_sum - with_eigenspaces_dim,
        pencil_exception: forms.len() == 2 && forms.iter().all(|f| f.degree() == 2),
    })
}
