//! Finite fields GF(2^m), binary polynomials and dense GF(2) linear algebra.

mod field;
mod matrix;
mod poly;

pub use field::{default_primitive_poly, make_field, minimal_polynomial, Gf2mField};
pub use matrix::{rref, Gf2Matrix, Rref};
pub use poly::Gf2Poly;
