//! Exact computation in the free metabelian Lie algebra `M_n` and its
//! automorphism group, via Magnus coordinates.

pub mod decomp;
pub mod endo;
pub mod error;
pub mod field;
pub mod magnus;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod random;
pub mod selftest;
pub mod serial;

pub use endo::{Endomorphism, LinearMap};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use magnus::{to_basis, BasisCombination, BasisTerm, JacobianColumn, LieExpr, MagnusElement};
pub use matrix::PolyMatrix;
pub use poly::{Degrees, Monomial, Poly};
