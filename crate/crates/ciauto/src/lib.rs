//! Exact verification toolkit for automorphism groups of complete
//! intersections in projective space.
//!
//! Every finite computation is exact: dimension counts are integers or
//! big rationals, and polynomial work happens over prime fields with all
//! brute-force claims labelled by the field they were made over.

pub mod birres;
pub mod certify;
pub mod combinat;
pub mod eigencalc;
pub mod exceptions;
pub mod exec;
pub mod report;
pub mod torelli;
pub mod varieties;

pub use combinat::{CIType, ExactRational};
pub use eigencalc::EigenSpec;
pub use exec::Exec;
