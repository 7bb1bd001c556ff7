//! Quasi-polynomials `v` or `v·y|y|^{-a}`, parity splitting and blow-up class tags.

use super::coeff::Coeff;
use super::multi::MultiPoly;
use crate::error::{Error, Result};
use serde::Serialize;

/// `base` (even in `y`), optionally multiplied by `y|y|^{-a}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiPoly<C: Coeff> {
    pub base: MultiPoly<C>,
    pub antisymmetric: bool,
}

impl<C: Coeff> QuasiPoly<C> {
    pub fn symmetric(base: MultiPoly<C>) -> Result<Self> {
        if !base.is_even_in_y() {
            return Err(Error::WrongParity("symmetric quasi-polynomial needs an even base".into()));
        }
        Ok(QuasiPoly { base, antisymmetric: false })
    }

    /// Homogeneity: `deg(base)`, plus `1 - a` with the antisymmetric factor.
    pub fn homogeneity(&self, a: f64) -> Option<f64> {
        let d = self.base.homogeneous_degree()? as f64;
        Some(if self.antisymmetric { d + 1.0 - a } else { d })
    }

    /// Blow-up class of a homogeneous solution.
    pub fn class_tag(&self, a: f64) -> Option<BlowupClassTag> {
        let k = self.homogeneity(a)?;
        Some(if self.antisymmetric {
            BlowupClassTag::Antisymmetric { k }
        } else if self.base.is_y_independent() {
            BlowupClassTag::SymmetricXOnly { k: k as u32 }
        } else {
            BlowupClassTag::SymmetricY { k: k as u32 }
        })
    }
}

/// `v·y|y|^{-a}` for `v` even in `y` and `L_{2-a}`-harmonic; the result is an
/// antisymmetric `L_a`-harmonic function of homogeneity `deg v + 1 - a`.
pub fn antisymmetric_from_symmetric<C: Coeff>(v: &MultiPoly<C>, a: &C) -> Result<QuasiPoly<C>> {
    let conj = C::from_int(2) - a.clone();
    if !v.apply_la(&conj)?.is_zero() {
        return Err(Error::InvalidArgument("v must be L_{2-a}-harmonic".into()));
    }
    Ok(QuasiPoly { base: v.clone(), antisymmetric: true })
}

/// Blow-up classes of homogeneous solutions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "class")]
pub enum BlowupClassTag {
    /// Symmetric and independent of `y` (harmonic in `x`).
    SymmetricXOnly { k: u32 },
    /// Symmetric with genuine `y` dependence.
    SymmetricY { k: u32 },
    /// Antisymmetric, `k ∈ (1 - a) + N`.
    Antisymmetric { k: f64 },
}

/// Even and odd parts in `y` of `u` at `p`: `((u(x,y) + u(x,-y))/2, (u(x,y) - u(x,-y))/2)`.
pub fn decompose<F: Fn(&[f64]) -> f64 + ?Sized>(u: &F, p: &[f64]) -> (f64, f64) {
    let mut q = p.to_vec();
    let last = q.len() - 1;
    q[last] = -q[last];
    let (a, b) = (u(p), u(&q));
    (0.5 * (a + b), 0.5 * (a - b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coeff::parse_ratio;
    use crate::poly::families::planar_even;
    use num::rational::BigRational;
    use num::One;

    fn q(s: &str) -> BigRational {
        parse_ratio(s).unwrap()
    }

    #[test]
    fn antisymmetric_examples() {
        let a = q("1/4");
        let one = MultiPoly::constant(1, BigRational::one());
        let u = antisymmetric_from_symmetric(&one, &a).unwrap();
        assert_eq!(u.homogeneity(0.25), Some(0.75));
        let v = planar_even(2, &(q("2") - a.clone())).unwrap();
        let u = antisymmetric_from_symmetric(&v, &a).unwrap();
        assert_eq!(u.homogeneity(0.25), Some(2.75));
        // planar_even(2, a) is not L_{2-a}-harmonic for a != 1
        let bad = planar_even(2, &a).unwrap();
        assert!(antisymmetric_from_symmetric(&bad, &a).is_err());
    }

    #[test]
    fn off_axis_residual_of_antisymmetric_solution() {
        // L_a(v y|y|^{-a}) by centered differences at a point off Σ
        let a = 0.25;
        let v = planar_even(2, &q("7/4")).unwrap().to_float(0.0);
        let u = |p: &[f64]| v.value(p) * p[1] * p[1].abs().powf(-a);
        let (x, y) = (0.3, 0.4);
        let h = 1e-3;
        let uxx = (u(&[x + h, y]) - 2.0 * u(&[x, y]) + u(&[x - h, y])) / (h * h);
        let uyy = (u(&[x, y + h]) - 2.0 * u(&[x, y]) + u(&[x, y - h])) / (h * h);
        let uy = (u(&[x, y + h]) - u(&[x, y - h])) / (2.0 * h);
        let res = uxx + uyy + a / y * uy;
        assert!(res.abs() < 1e-5, "{res}");
    }

    #[test]
    fn decompose_examples() {
        let a = 0.3;
        let u = |p: &[f64]| p[0] + p[1] * p[1].abs().powf(-a);
        let (e, o) = decompose(&u, &[0.2, 0.5]);
        assert!((e - 0.2).abs() < 1e-15);
        assert!((o - 0.5f64.powf(1.0 - a)).abs() < 1e-15);
        let p2 = planar_even(2, &q("3/10")).unwrap().to_float(0.0);
        let w = |p: &[f64]| p2.value(p) + 3.0 * p[1] * p[1].abs().powf(-a);
        let pt = [0.7, -0.4];
        let (e, o) = decompose(&w, &pt);
        assert!((e - p2.value(&pt)).abs() < 1e-14);
        assert!((o + 3.0 * 0.4f64.powf(1.0 - a)).abs() < 1e-14);
    }

    #[test]
    fn class_tags() {
        let a = q("1/2");
        let x: QuasiPoly<BigRational> = QuasiPoly::symmetric(MultiPoly::var(1, 0)).unwrap();
        assert_eq!(x.class_tag(0.5), Some(BlowupClassTag::SymmetricXOnly { k: 1 }));
        let p = QuasiPoly::symmetric(planar_even(2, &a).unwrap()).unwrap();
        assert_eq!(p.class_tag(0.5), Some(BlowupClassTag::SymmetricY { k: 2 }));
    }
}
