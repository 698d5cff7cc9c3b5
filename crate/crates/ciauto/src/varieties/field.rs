//! Prime fields `F_q` with `q < 2^32`, elements stored reduced in `u64`.

use serde::{Deserialize, Serialize};

use crate::eigencalc::is_prime;

use super::VarietyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self, VarietyError> {
        if q >= 1 << 32 || !is_prime(q) {
            return Err(VarietyError::NotPrime(q));
        }
        Ok(PrimeField { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a) % self.q
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.q;
        a %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.q), "inverse of zero in F_{}", self.q);
        self.pow(a, self.q - 2)
    }

    /// Image of an integer, `None` when it vanishes mod `q`.
    pub fn nonzero(&self, x: i64) -> Option<u64> {
        let r = self.reduce(x);
        (r != 0).then_some(r)
    }

    /// Smallest primitive `k`-th root of unity, if `k | q - 1`.
    pub fn root_of_unity(&self, k: u64) -> Option<u64> {
        if k == 0 || !(self.q - 1).is_multiple_of(k) {
            return None;
        }
        let prime_factors: Vec<u64> = (2..=k).filter(|&p| k.is_multiple_of(p) && is_prime(p)).collect();
        (1..self.q).find_map(|g| {
            let z = self.pow(g, (self.q - 1) / k);
            prime_factors.iter().all(|&p| self.pow(z, k / p) != 1).then_some(z)
        })
    }

    /// Smallest prime `q >= from` with `k | q - 1`.
    pub fn with_root_of_unity(k: u64, from: u64) -> Self {
        let mut q = from.max(3);
        loop {
            if is_prime(q) && (q - 1).is_multiple_of(k) {
                return PrimeField { q };
            }
            q += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.mul(f.inv(37), 37), 1);
        assert_eq!(f.reduce(-1), 100);
        assert_eq!(f.pow(3, 100), 1);
        assert!(PrimeField::new(100).is_err());
    }

    #[test]
    fn roots_of_unity() {
        let f = PrimeField::new(101).unwrap();
        let z = f.root_of_unity(10).unwrap();
        assert_eq!(f.pow(z, 10), 1);
        assert!((1..10).all(|e| f.pow(z, e) != 1));
        assert_eq!(f.root_of_unity(3), None);
        let g = PrimeField::with_root_of_unity(14, 100);
        assert_eq!(g.q(), 113);
    }
}
