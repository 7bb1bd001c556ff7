//! Closed-form weighted moments of polynomials over spheres and balls centred on `Σ`.

use super::coeff::Coeff;
use super::multi::MultiPoly;
use crate::error::{Error, Result};
use crate::quadrature::WeightParam;
use serde::Serialize;
use statrs::function::gamma::gamma;

/// `∫_{B_r} |y|^a p dX` and `∫_{∂B_r} |y|^a p dσ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub ball: f64,
    pub sphere: f64,
}

/// `∫_{S^n} |y|^a x^α y^β dσ = 2 Π Γ((α_i+1)/2) Γ((β+a+1)/2) / Γ((|α|+β+a+n+1)/2)`
/// when every exponent is even, and zero otherwise.
pub fn sphere_monomial_moment(exps: &[u32], a: f64) -> f64 {
    if exps.iter().any(|e| e % 2 == 1) {
        return 0.0;
    }
    let n = exps.len() - 1;
    let deg: u32 = exps.iter().sum();
    let mut v = 2.0;
    for &e in &exps[..n] {
        v *= gamma((e as f64 + 1.0) / 2.0);
    }
    v *= gamma((exps[n] as f64 + a + 1.0) / 2.0);
    v / gamma((deg as f64 + a + n as f64 + 1.0) / 2.0)
}

/// Weighted moments of `p` on `B_r(0)` and `∂B_r(0)`.
pub fn weighted_moment<C: Coeff>(p: &MultiPoly<C>, r: f64, w: &WeightParam) -> Result<Moments> {
    if p.n() != w.n {
        return Err(Error::InvalidArgument(format!("polynomial has n = {}, weight has n = {}", p.n(), w.n)));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let mut ball = 0.0;
    let mut sphere = 0.0;
    for (e, c) in p.terms() {
        let m = sphere_monomial_moment(e, w.a);
        if m == 0.0 {
            continue;
        }
        let deg: u32 = e.iter().sum();
        let expo = deg as f64 + w.sphere_exponent();
        let c = c.to_f64_at(w.a);
        sphere += c * m * r.powf(expo);
        ball += c * m * r.powf(expo + 1.0) / (expo + 1.0);
    }
    Ok(Moments { ball, sphere })
}
