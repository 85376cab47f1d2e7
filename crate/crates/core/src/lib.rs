//! Exact and numerical machinery for the multi-Hamiltonian structure of the
//! Toda and Volterra lattices.

pub mod bogo;
pub mod catalog;
pub mod error;
pub mod flows;
pub mod linalg;
pub mod matrix;
pub mod moser;
pub mod numeric;
pub mod poisson;
pub mod polyalg;
pub mod reduction;

pub use catalog::{Family, Kind, SpecialField, Symmetry, SystemId};
pub use error::{Error, Result};
pub use matrix::{LaxMatrix, PolyMatrix};
pub use poisson::{Jacobiator, PoissonTensor, PolyVectorField};
pub use polyalg::{q, qi, Gaussian, LinearMap, Monomial, Poly, Scalar, VarSpace, Vars, Q};
pub use reduction::{FiniteGroupAction, FixedPointChart, ReductionReport};
