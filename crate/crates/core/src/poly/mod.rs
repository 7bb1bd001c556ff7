//! Exact homogeneous `L_a`-harmonic polynomials and their symbolic checks.

pub mod coeff;
pub mod families;
pub mod json;
pub mod linalg;
pub mod moments;
pub mod multi;
pub mod quasi;

pub use coeff::{parse_ratio, ratio_to_f64, Coeff, RatFn, UPoly};
pub use families::{
    coeff_c, garofalo_extend, garofalo_extend_by_system, planar, planar_even, planar_odd, symmetric_basis,
};
pub use moments::{weighted_moment, Moments};
pub use multi::{monomials, Exponents, FloatPoly, MultiPoly};
pub use quasi::{antisymmetric_from_symmetric, decompose, BlowupClassTag, QuasiPoly};

/// Exact rationals, the default coefficient field.
pub type Q = num::rational::BigRational;
