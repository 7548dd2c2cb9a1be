//! Exact arithmetic over GF(p^e) and dense linear algebra.

pub mod field;
pub mod matrix;
pub mod projective;
pub mod upoly;

pub use field::{field_with_modulus, is_prime, make_field, Elem, FieldSpec};
pub use matrix::{solve_linear, LinearSolution, Matrix, Rref, Subspace};
