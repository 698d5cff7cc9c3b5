//! Finite-field checks on explicit complete intersections.
//!
//! Everything is dense linear algebra and point enumeration over a prime
//! field `F_q`. Claims derived from enumeration hold over `F_q` only and are
//! labelled that way in reports.

pub mod chord;
pub mod cokernel;
pub mod cyclic;
pub mod field;
pub mod ideal;
pub mod linalg;
pub mod nodes;
pub mod pencil;
pub mod pluecker;
pub mod poly;
pub mod strata;

use thiserror::Error;

use crate::eigencalc::EigenError;

pub use field::PrimeField;
pub use poly::HPoly;
pub use strata::{LinearSubspace, PointSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VarietyError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("enumeration needs {needed} points, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("no degree-{degree} monomials with every exponent <= {degree} - {multiplicity}")]
    EmptySpan { degree: u32, multiplicity: u32 },
    #[error("characteristic 2 is not supported here")]
    CharacteristicTwo,
    #[error("form {0} is not an eigenvector of the diagonal action")]
    NotEigenvector(usize),
    #[error("F_{q} has no primitive {k}-th root of unity")]
    NoRootOfUnity { k: u64, q: u64 },
    #[error("eigenvalues must be distinct")]
    RepeatedEigenvalues,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("centre and target subspaces meet")]
    NotDisjoint,
    #[error(transparent)]
    Eigen(#[from] EigenError),
}
