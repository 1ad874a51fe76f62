//! Complex matrix-polynomial algebra.

mod cpoly;
mod gcld;
mod matrix;
mod roots;

pub use cpoly::CPoly;
pub use gcld::{are_left_coprime, gcld, is_unimodular, Gcld};
pub use matrix::{adjugate_poly, det_poly, max_coeff_diff, MatrixPoly};
pub use roots::{roots_with_multiplicity, Root};
