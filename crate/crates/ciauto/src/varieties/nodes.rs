//! Complete intersections with nodes at the coordinate points.
//!
//! `F_1..F_{c-1}` are taken from forms vanishing at every coordinate point
//! (all exponents `<= d-1`), `F_c` from forms singular there (all exponents
//! `<= d-2`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinat::CIType;

use super::field::PrimeField;
use super::linalg::{kernel, rank};
use super::poly::{monomials, HPoly, Monomial};
use super::strata::{eval_matrix, jacobian_matrix, normalize};
use super::VarietyError;

/// Monomials of degree `d` in `nvars` variables with every exponent `<= d - m`.
pub fn multiplicity_span(nvars: usize, d: u32, m: u32) -> Vec<Monomial> {
    let cap = d.saturating_sub(m);
    if m > d {
        return Vec::new();
    }
    monomials(nvars, d).into_iter().filter(|e| e.iter().all(|&x| x <= cap)).collect()
}

fn random_member(field: PrimeField, nvars: usize, d: u32, span: &[Monomial], rng: &mut ChaCha8Rng) -> HPoly {
    HPoly::from_terms(field, nvars, d, span.iter().map(|m| (m.clone(), rng.gen_range(1..field.q() as i64))))
}

pub fn nodal_ci(ci: &CIType, field: PrimeField, seed: u64) -> Result<Vec<HPoly>, VarietyError> {
    let nvars = ci.ambient() as usize + 1;
    let degs = ci.degrees();
    let c = degs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(c);
    for (i, &d) in degs.iter().enumerate() {
        let m = if i + 1 == c { 2 } else { 1 };
        let span = multiplicity_span(nvars, d, m);
        if span.is_empty() {
            return Err(VarietyError::EmptySpan { degree: d, multiplicity: m });
        }
        out.push(random_member(field, nvars, d, &span, &mut rng));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCheck {
    pub point: Vec<u64>,
    pub on_x: bool,
    /// Rank of the Jacobian of `F_1..F_{c-1}`; `c-1` required.
    pub rank_others: usize,
    /// `c - rank` of the full Jacobian; 1 required.
    pub corank: usize,
    /// Rank of the Hessian of `F_c - Σ λ_i F_i` on the common tangent space,
    /// `None` when the earlier checks already failed.
    pub hessian_rank: Option<usize>,
    pub tangent_dim: usize,
    pub is_node: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeReport {
    pub q: u64,
    pub checks: Vec<NodeCheck>,
    pub all_nodes: bool,
}

/// Ordinary double point test on the affine chart where the point has a
/// coordinate equal to 1. With `A` the gradients of `F_1..F_{c-1}` and
/// `dF_c = Σ λ_i dF_i`, the point is a node of `X` when the Hessian of
/// `F_c - Σ λ_i F_i` is nondegenerate on `ker A`.
pub fn verify_nodes(forms: &[HPoly], pts: &[Vec<u64>], field: PrimeField) -> Result<NodeReport, VarietyError> {
    if field.q() == 2 {
        return Err(VarietyError::CharacteristicTwo);
    }
    let c = forms.len();
    let jac = jacobian_matrix(field, forms);
    let hess: Vec<Vec<Vec<HPoly>>> =
        forms.iter().map(|f| (0..f.nvars()).map(|j| (0..f.nvars()).map(|k| f.partial(field, j).partial(field, k)).collect()).collect()).collect();
    let mut checks = Vec::new();
    for p in pts {
        let p = normalize(field, p).expect("nonzero point");
        let chart = p.iter().position(|&x| x == 1).expect("normalized");
        let on_x = forms.iter().all(|f| f.eval(field, &p) == 0);
        let grads: Vec<Vec<u64>> = eval_matrix(field, &jac, &p)
            .into_iter()
            .map(|row| row.into_iter().enumerate().filter(|(j, _)| *j != chart).map(|(_, x)| x).collect())
            .collect();
        let rank_others = rank(field, &grads[..c - 1]);
        let corank = c - rank(field, &grads);
        let n = p.len() - 1;
        let tangent = kernel(field, &grads[..c - 1], n);
        let mut hessian_rank = None;
        let mut is_node = false;
        if on_x && rank_others == c - 1 && corank == 1 {
            // Columns dF_1..dF_c; a kernel vector with last entry nonzero
            // gives the multipliers.
            let cols: Vec<Vec<u64>> = (0..n).map(|k| grads.iter().map(|g| g[k]).collect()).collect();
            let ker = kernel(field, &cols, c);
            let v = ker.iter().find(|v| v[c - 1] != 0).expect("dF_c lies in the span of the others");
            let inv = field.inv(v[c - 1]);
            let lambda: Vec<u64> = v[..c - 1].iter().map(|&x| field.mul(x, inv)).collect();
            // H = Hess F_c + Σ (v_i / v_c) Hess F_i, since dF_c = -Σ (v_i/v_c) dF_i.
            let mut h = vec![vec![0u64; n]; n];
            let idx: Vec<usize> = (0..=n).filter(|&j| j != chart).collect();
            for (a, &ja) in idx.iter().enumerate() {
                for (b, &jb) in idx.iter().enumerate() {
                    let mut x = hess[c - 1][ja][jb].eval(field, &p);
                    for (i, &l) in lambda.iter().enumerate() {
                        x = field.add(x, field.mul(l, hess[i][ja][jb].eval(field, &p)));
                    }
                    h[a][b] = x;
                }
            }
            let restricted: Vec<Vec<u64>> = tangent
                .iter()
                .map(|u| {
                    tangent
                        .iter()
                        .map(|w| {
                            let mut s = 0;
                            for a in 0..n {
                                for b in 0..n {
                                    s = field.add(s, field.mul(u[a], field.mul(h[a][b], w[b])));
                                }
                            }
                            s
                        })
                        .collect()
                })
                .collect();
            let r = rank(field, &restricted);
            hessian_rank = Some(r);
            is_node = r == tangent.len();
        }
        checks.push(NodeCheck { point: p, on_x, rank_others, corank, hessian_rank, tangent_dim: tangent.len(), is_node });
    }
    let all_nodes = checks.iter().all(|c| c.is_node);
    Ok(NodeReport { q: field.q(), checks, all_nodes })
}
