//! Projective parameterized linear codes.
//!
//! Given an exponent matrix `A` (n variables by m monomials) over GF(q), the
//! toric set `X` is the image of `(K^*)^n` under `t -> [t^{a_1} : ... : t^{a_m}]`
//! and `C_X(d)` is the code of degree-d forms evaluated on `X`. This crate
//! computes its length, dimension, regularity and distance bounds exactly.

pub mod checks;
pub mod distance;
pub mod field;
pub mod fixtures;
pub mod hilbert;
pub mod incidence;
pub mod length;
pub mod linalg;
pub mod pipeline;
pub mod toric;

pub use field::{FieldElement, GaloisField};
pub use pipeline::{run, RunConfig, RunReport};
