//! Graded pieces of `S/(F_1..F_c)` by linear algebra on monomial bases.

use std::collections::BTreeMap;

use super::field::PrimeField;
use super::linalg::RowSpace;
use super::poly::{monomial_index, monomials, HPoly, Monomial};

/// Degree-`d` part of the ideal, in the monomial basis of `S_d`.
pub fn ideal_part(field: PrimeField, forms: &[HPoly], nvars: usize, d: u32) -> RowSpace {
    let index = monomial_index(nvars, d);
    let mut space = RowSpace::new(field, index.len());
    for f in forms {
        if f.degree() > d {
            continue;
        }
        for m in monomials(nvars, d - f.degree()) {
            space.insert(f.mul_monomial(field, &m).to_vector(&index));
            if space.is_full() {
                return space;
            }
        }
    }
    space
}

/// `dim (S/(F))_d`.
pub fn h0_oracle(field: PrimeField, forms: &[HPoly], nvars: usize, d: u32) -> usize {
    let ideal = ideal_part(field, forms, nvars, d);
    ideal.ncols() - ideal.dim()
}

/// One graded piece `R_d` with its monomial index and ideal.
#[derive(Clone, Debug)]
pub struct QuotientPiece {
    pub degree: u32,
    pub index: BTreeMap<Monomial, usize>,
    pub ideal: RowSpace,
}

impl QuotientPiece {
    pub fn new(field: PrimeField, forms: &[HPoly], nvars: usize, d: u32) -> Self {
        QuotientPiece { degree: d, index: monomial_index(nvars, d), ideal: ideal_part(field, forms, nvars, d) }
    }

    pub fn dim(&self) -> usize {
        self.index.len() - self.ideal.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_form(field: PrimeField, nvars: usize, d: u32, rng: &mut ChaCha8Rng) -> HPoly {
        HPoly::from_terms(field, nvars, d, monomials(nvars, d).into_iter().map(|m| (m, rng.gen_range(0..field.q() as i64))))
    }

    #[test]
    fn oracle_examples() {
        let q = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let two_quadrics = [random_form(q, 5, 2, &mut rng), random_form(q, 5, 2, &mut rng)];
        assert_eq!(h0_oracle(q, &two_quadrics, 5, 2), 13);
        let cubic = [random_form(q, 4, 3, &mut rng)];
        assert_eq!(h0_oracle(q, &cubic, 4, 3), 19);
        assert_eq!(h0_oracle(q, &[], 4, 2), 10);
    }
}
