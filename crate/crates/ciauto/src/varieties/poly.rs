//! Homogeneous polynomials over a prime field.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::field::PrimeField;

/// Exponent vector; entries sum to the polynomial's degree.
pub type Monomial = Vec<u32>;

/// Homogeneous form in `z_0..z_n`. No zero coefficient is ever stored, and
/// every key has total degree `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, u64>,
}

/// Monomials of degree `d` in `nvars` variables, graded-lex descending
/// (`z_0^d` first).
pub fn monomials(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(nvars, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Position of each monomial of degree `d` in [`monomials`] order.
pub fn monomial_index(nvars: usize, d: u32) -> BTreeMap<Monomial, usize> {
    monomials(nvars, d).into_iter().enumerate().map(|(i, m)| (m, i)).collect()
}

impl HPoly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        HPoly { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn monomial(field: PrimeField, exps: Monomial, coeff: i64) -> Self {
        let degree = exps.iter().sum();
        let mut p = HPoly::zero(exps.len(), degree);
        p.add_term(field, exps, field.reduce(coeff));
        p
    }

    /// Sum of `coeff * z^exps`; panics on inhomogeneous input.
    pub fn from_terms(field: PrimeField, nvars: usize, degree: u32, terms: impl IntoIterator<Item = (Monomial, i64)>) -> Self {
        let mut p = HPoly::zero(nvars, degree);
        for (m, c) in terms {
            p.add_term(field, m, field.reduce(c));
        }
        p
    }

    /// `Σ_j c_j z_j^d`.
    pub fn diagonal(field: PrimeField, d: u32, coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        HPoly::from_terms(
            field,
            n,
            d,
            coeffs.iter().enumerate().map(|(j, &c)| {
                let mut m = vec![0; n];
                m[j] = d;
                (m, c)
            }),
        )
    }

    pub fn add_term(&mut self, field: PrimeField, exps: Monomial, c: u64) {
        assert_eq!(exps.len(), self.nvars, "variable count");
        assert_eq!(exps.iter().sum::<u32>(), self.degree, "inhomogeneous term");
        let c = c % field.q();
        if c == 0 {
            return;
        }
        let v = field.add(self.coeff(&exps), c);
        if v == 0 {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, v);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &[u32]) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add(&self, field: PrimeField, other: &HPoly) -> HPoly {
        self.add_scaled(field, other, 1)
    }

    pub fn add_scaled(&self, field: PrimeField, other: &HPoly, s: u64) -> HPoly {
        assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(field, m.clone(), field.mul(c, s));
        }
        out
    }

    pub fn scale(&self, field: PrimeField, s: u64) -> HPoly {
        HPoly::zero(self.nvars, self.degree).add_scaled(field, self, s)
    }

    pub fn mul(&self, field: PrimeField, other: &HPoly) -> HPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = HPoly::zero(self.nvars, self.degree + other.degree);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let m = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(field, m, field.mul(ca, cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, field: PrimeField, m: &[u32]) -> HPoly {
        let d: u32 = m.iter().sum();
        let mut out = HPoly::zero(self.nvars, self.degree + d);
        for (a, c) in self.terms() {
            out.add_term(field, a.iter().zip(m).map(|(x, y)| x + y).collect(), c);
        }
        out
    }

    pub fn pow(&self, field: PrimeField, e: u32) -> HPoly {
        let mut out = HPoly::monomial(field, vec![0; self.nvars], 1);
        for _ in 0..e {
            out = out.mul(field, self);
        }
        out
    }

    /// Formal `∂/∂z_j`; exponents multiply in the field, so `z^q` dies.
    pub fn partial(&self, field: PrimeField, j: usize) -> HPoly {
        let mut out = HPoly::zero(self.nvars, self.degree.saturating_sub(1));
        for (m, c) in self.terms() {
            if m[j] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[j] -= 1;
            out.add_term(field, m2, field.mul(c, u64::from(m[j]) % field.q()));
        }
        out
    }

    pub fn eval(&self, field: PrimeField, point: &[u64]) -> u64 {
        self.terms().fold(0, |acc, (m, c)| {
            let v = m.iter().zip(point).fold(c, |v, (&e, &x)| field.mul(v, field.pow(x, u64::from(e))));
            field.add(acc, v)
        })
    }

    /// `F(M z)`: substitute `z_i -> Σ_k M[i][k] z_k`.
    pub fn substitute(&self, field: PrimeField, m: &[Vec<u64>]) -> HPoly {
        let n = self.nvars;
        let forms: Vec<HPoly> = m
            .iter()
            .map(|row| {
                HPoly::from_terms(
                    field,
                    n,
                    1,
                    row.iter().enumerate().map(|(k, &c)| {
                        let mut e = vec![0; n];
                        e[k] = 1;
                        (e, c as i64)
                    }),
                )
            })
            .collect();
        let mut out = HPoly::zero(n, self.degree);
        for (mono, c) in self.terms() {
            let mut t = HPoly::monomial(field, vec![0; n], c as i64);
            for (i, &e) in mono.iter().enumerate() {
                if e > 0 {
                    t = t.mul(field, &forms[i].pow(field, e));
                }
            }
            out = out.add(field, &t);
        }
        out
    }

    /// Coefficient vector in [`monomials`] order.
    pub fn to_vector(&self, index: &BTreeMap<Monomial, usize>) -> Vec<u64> {
        let mut v = vec![0; index.len()];
        for (m, c) in self.terms() {
            v[index[m]] = c;
        }
        v
    }
}

/// `coeff*z0^a0*...*zn^an + ...`, graded-lex descending; exponent 1 and
/// absent variables are omitted.
impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (j, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*z{j}")?,
                    _ => write!(f, "*z{j}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl Serialize for HPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
