//! Exact polynomial algebra over the rationals and Gaussian rationals.

pub mod linear_map;
mod parse;
pub mod poly;
pub mod scalar;

pub use linear_map::{subst_linear, LinearMap};
pub use poly::{Monomial, Poly, VarSpace, Vars};
pub use scalar::{q, qi, to_gaussian, Gaussian, Scalar, Q};
