//! Scalar fields on `R^{n+1}` with gradients, as consumed by the functionals.

use crate::poly::{Coeff, FloatPoly, MultiPoly, QuasiPoly};
use std::sync::Arc;

/// A scalar field with a gradient, evaluable anywhere in its domain.
pub trait Field: Send + Sync {
    /// Ambient dimension `n + 1`.
    fn dim(&self) -> usize;

    fn value(&self, p: &[f64]) -> f64;

    /// Writes `∇u(p)` into `g` (length `dim()`).
    fn gradient(&self, p: &[f64], g: &mut [f64]);
}

impl<F: Field + ?Sized> Field for Arc<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, p: &[f64]) -> f64 {
        (**self).value(p)
    }
    fn gradient(&self, p: &[f64], g: &mut [f64]) {
        (**self).gradient(p, g)
    }
}

impl<F: Field + ?Sized> Field for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, p: &[f64]) -> f64 {
        (**self).value(p)
    }
    fn gradient(&self, p: &[f64], g: &mut [f64]) {
        (**self).gradient(p, g)
    }
}

/// `y|y|^{-a}` and its derivative `(1 - a)|y|^{-a}`.
#[inline]
pub fn odd_factor(y: f64, a: f64) -> (f64, f64) {
    if y == 0.0 {
        let d = if a > 0.0 { f64::INFINITY } else if a < 0.0 { 0.0 } else { 1.0 };
        return (0.0, d);
    }
    let m = y.abs().powf(-a);
    (y * m, (1.0 - a) * m)
}

/// `e(X) + v(X)·y|y|^{-a}` with polynomial `e` and `v`; `v` may be absent.
#[derive(Clone, Debug)]
pub struct ExactField {
    pub even: FloatPoly,
    pub odd: Option<FloatPoly>,
    pub a: f64,
}

impl ExactField {
    pub fn poly(p: FloatPoly, a: f64) -> Self {
        ExactField { even: p, odd: None, a }
    }

    pub fn from_poly<C: Coeff>(p: &MultiPoly<C>, a: f64) -> Self {
        Self::poly(p.to_float(a), a)
    }

    pub fn from_quasi<C: Coeff>(q: &QuasiPoly<C>, a: f64) -> Self {
        let f = q.base.to_float(a);
        if q.antisymmetric {
            ExactField { even: FloatPoly::zero(f.n()), odd: Some(f), a }
        } else {
            Self::poly(f, a)
        }
    }

    /// `v·y|y|^{-a}`.
    pub fn antisymmetric(v: FloatPoly, a: f64) -> Self {
        ExactField { even: FloatPoly::zero(v.n()), odd: Some(v), a }
    }

    /// Sum of the even and odd pieces of two exact fields.
    pub fn plus(&self, o: &ExactField) -> ExactField {
        assert_eq!(self.a, o.a);
        let join = |p: &FloatPoly, q: &FloatPoly| {
            let mut t = p.terms().to_vec();
            t.extend_from_slice(q.terms());
            FloatPoly::new(p.n(), t)
        };
        let odd = match (&self.odd, &o.odd) {
            (Some(p), Some(q)) => Some(join(p, q)),
            (Some(p), None) | (None, Some(p)) => Some(p.clone()),
            (None, None) => None,
        };
        ExactField { even: join(&self.even, &o.even), odd, a: self.a }
    }

    pub fn scaled(&self, s: f64) -> ExactField {
        ExactField { even: self.even.scaled(s), odd: self.odd.as_ref().map(|v| v.scaled(s)), a: self.a }
    }

    /// The even-in-`y` part as its own field.
    pub fn even_part(&self) -> ExactField {
        ExactField { even: self.even.clone(), odd: None, a: self.a }
    }

    /// The odd-in-`y` part as its own field.
    pub fn odd_part(&self) -> ExactField {
        ExactField { even: FloatPoly::zero(self.even.n()), odd: self.odd.clone(), a: self.a }
    }
}

impl Field for ExactField {
    fn dim(&self) -> usize {
        self.even.n() + 1
    }

    fn value(&self, p: &[f64]) -> f64 {
        let mut v = self.even.value(p);
        if let Some(o) = &self.odd {
            let (f, _) = odd_factor(p[p.len() - 1], self.a);
            v += o.value(p) * f;
        }
        v
    }

    fn gradient(&self, p: &[f64], g: &mut [f64]) {
        self.even.gradient(p, g);
        if let Some(o) = &self.odd {
            let d = p.len();
            let mut h = vec![0.0; d];
            o.gradient(p, &mut h);
            let (f, df) = odd_factor(p[d - 1], self.a);
            let v = o.value(p);
            for i in 0..d {
                g[i] += h[i] * f;
            }
            if v != 0.0 {
                g[d - 1] += v * df;
            }
        }
    }
}

/// Linear combination `Σ c_i u_i`.
#[derive(Clone)]
pub struct Combo {
    parts: Vec<(f64, Arc<dyn Field>)>,
}

impl Combo {
    pub fn new(parts: Vec<(f64, Arc<dyn Field>)>) -> Self {
        assert!(!parts.is_empty(), "empty combination");
        let d = parts[0].1.dim();
        assert!(parts.iter().all(|(_, f)| f.dim() == d), "dimension mismatch");
        Combo { parts }
    }
}

impl Field for Combo {
    fn dim(&self) -> usize {
        self.parts[0].1.dim()
    }
    fn value(&self, p: &[f64]) -> f64 {
        self.parts.iter().map(|(c, f)| c * f.value(p)).sum()
    }
    fn gradient(&self, p: &[f64], g: &mut [f64]) {
        g.iter_mut().for_each(|v| *v = 0.0);
        let mut h = vec![0.0; g.len()];
        for (c, f) in &self.parts {
            f.gradient(p, &mut h);
            for (gi, hi) in g.iter_mut().zip(&h) {
                *gi += c * hi;
            }
        }
    }
}

/// Even (`sign = 1`) or odd (`sign = -1`) part in `y` of a field.
pub struct ParityPart<F: Field> {
    pub inner: F,
    pub sign: f64,
}

impl<F: Field> ParityPart<F> {
    pub fn even(inner: F) -> Self {
        ParityPart { inner, sign: 1.0 }
    }
    pub fn odd(inner: F) -> Self {
        ParityPart { inner, sign: -1.0 }
    }
}

fn reflect(p: &[f64]) -> Vec<f64> {
    let mut q = p.to_vec();
    let l = q.len() - 1;
    q[l] = -q[l];
    q
}

impl<F: Field> Field for ParityPart<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, p: &[f64]) -> f64 {
        0.5 * (self.inner.value(p) + self.sign * self.inner.value(&reflect(p)))
    }
    fn gradient(&self, p: &[f64], g: &mut [f64]) {
        let d = g.len();
        let mut h = vec![0.0; d];
        self.inner.gradient(p, g);
        self.inner.gradient(&reflect(p), &mut h);
        // chain rule through the reflection flips the y component
        h[d - 1] = -h[d - 1];
        for i in 0..d {
            g[i] = 0.5 * (g[i] + self.sign * h[i]);
        }
    }
}

/// `X ↦ scale·u(X0 + r X)`, the rescaled field on the unit ball.
pub struct Rescaled<F: Field> {
    pub inner: F,
    pub center: Vec<f64>,
    pub r: f64,
    pub scale: f64,
}

impl<F: Field> Rescaled<F> {
    fn map(&self, p: &[f64]) -> Vec<f64> {
        self.center.iter().zip(p).map(|(c, x)| c + self.r * x).collect()
    }
}

impl<F: Field> Field for Rescaled<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, p: &[f64]) -> f64 {
        self.scale * self.inner.value(&self.map(p))
    }
    fn gradient(&self, p: &[f64], g: &mut [f64]) {
        self.inner.gradient(&self.map(p), g);
        let f = self.scale * self.r;
        g.iter_mut().for_each(|v| *v *= f);
    }
}

/// A closure-backed field with a centered-difference gradient.
pub struct FnField<F: Fn(&[f64]) -> f64 + Send + Sync> {
    pub dim: usize,
    pub f: F,
    pub step: f64,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f, step: 1e-5 }
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> Field for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, p: &[f64]) -> f64 {
        (self.f)(p)
    }
    fn gradient(&self, p: &[f64], g: &mut [f64]) {
        let mut q = p.to_vec();
        for i in 0..self.dim {
            let h = self.step * (1.0 + p[i].abs());
            q[i] = p[i] + h;
            let fp = (self.f)(&q);
            q[i] = p[i] - h;
            let fm = (self.f)(&q);
            q[i] = p[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_ratio, planar_even};

    #[test]
    fn exact_gradient_matches_differences() {
        let a = 0.3;
        let p = planar_even(2, &parse_ratio("3/10").unwrap()).unwrap().to_float(a);
        let v = MultiPoly::<crate::poly::Q>::var(1, 0).to_float(a);
        let u = ExactField { even: p, odd: Some(v), a };
        let fd = FnField { dim: 2, f: |q: &[f64]| u.value(q), step: 1e-6 };
        for pt in [[0.3, 0.4], [-0.2, -0.7]] {
            let (mut g1, mut g2) = ([0.0; 2], [0.0; 2]);
            u.gradient(&pt, &mut g1);
            fd.gradient(&pt, &mut g2);
            for i in 0..2 {
                assert!((g1[i] - g2[i]).abs() < 1e-7, "{g1:?} {g2:?}");
            }
        }
    }

    #[test]
    fn parity_parts_recover_pieces() {
        let a = -0.4;
        let p = planar_even(2, &parse_ratio("-2/5").unwrap()).unwrap().to_float(a);
        let v = FloatPoly::new(1, vec![(vec![0, 0], 3.0)]);
        let u = ExactField { even: p.clone(), odd: Some(v), a };
        let e = ParityPart::even(&u);
        let o = ParityPart::odd(&u);
        let pt = [0.6, -0.3];
        assert!((e.value(&pt) - p.value(&pt)).abs() < 1e-14);
        assert!((o.value(&pt) + 3.0 * 0.3f64.powf(1.0 - a)).abs() < 1e-14);
        let (mut g, mut h) = ([0.0; 2], [0.0; 2]);
        e.gradient(&pt, &mut g);
        p.gradient(&pt, &mut h);
        assert!((g[0] - h[0]).abs() < 1e-14 && (g[1] - h[1]).abs() < 1e-14);
    }
}
