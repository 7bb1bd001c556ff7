//! Numerical laboratory for the degenerate-singular operator `L_a = div(|y|^a ∇·)`
//! and the fractional Laplacian.

pub mod acceptance;
pub mod blowup;
pub mod corpus;
pub mod error;
pub mod extension;
pub mod field;
pub mod monotonicity;
pub mod nodal;
pub mod poly;
pub mod quadrature;
pub mod sharm1d;
pub mod solver;

pub use error::{Error, Result};
