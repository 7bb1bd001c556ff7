//! Sparse multivariate polynomials in `(x_1, .., x_n, y)` with exact coefficients.

use super::coeff::{Coeff, RatFn};
use crate::error::{Error, Result};
use num::rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector `(α_1, .., α_n, β)`; the last entry is the power of `y`.
pub type Exponents = Vec<u32>;

/// A polynomial in `n + 1` variables, the last one being `y`.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly<C: Coeff> {
    n: usize,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(n: usize) -> Self {
        MultiPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::monomial(vec![0; n + 1], c)
    }

    pub fn monomial(exps: Exponents, c: C) -> Self {
        assert!(!exps.is_empty(), "exponent vector must include y");
        let n = exps.len() - 1;
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The coordinate function `x_i` (or `y` for `i == n`).
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n + 1];
        e[i] = 1;
        Self::monomial(e, C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, C)>>(n: usize, it: I) -> Self {
        let mut p = Self::zero(n);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// Number of `x` variables.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponents, c: C) {
        assert_eq!(e.len(), self.n + 1, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The common degree of all monomials, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn is_even_in_y(&self) -> bool {
        self.terms.keys().all(|e| e[self.n] % 2 == 0)
    }

    pub fn is_odd_in_y(&self) -> bool {
        self.terms.keys().all(|e| e[self.n] % 2 == 1)
    }

    /// Parity label used in serialized headers.
    pub fn parity_label(&self) -> &'static str {
        if self.is_zero() || self.is_even_in_y() {
            "even"
        } else if self.is_odd_in_y() {
            "odd"
        } else {
            "mixed"
        }
    }

    /// True when no monomial contains `y`.
    pub fn is_y_independent(&self) -> bool {
        self.terms.keys().all(|e| e[self.n] == 0)
    }

    pub fn neg(&self) -> Self {
        MultiPoly { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        MultiPoly { n: self.n, terms: self.terms.iter().map(|(e, x)| (e.clone(), x.clone() * c.clone())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "dimension mismatch");
        let mut p = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.clone() * c2.clone());
            }
        }
        p
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c.clone() * C::from_int(e[i] as i64));
            }
        }
        p
    }

    /// Antiderivative in variable `i` with zero constant of integration.
    pub fn antiderivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.n);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[i] += 1;
            let k = C::from_int(f[i] as i64);
            p.add_term(f, c.clone() / k);
        }
        p
    }

    /// `Δ_x p`, the Laplacian in the `x` variables only.
    pub fn laplacian_x(&self) -> Self {
        let mut p = Self::zero(self.n);
        for i in 0..self.n {
            p = p.add(&self.derivative(i).derivative(i));
        }
        p
    }

    /// `|y|^{-a} div(|y|^a ∇p) = Δ_x p + ∂_yy p + (a/y) ∂_y p` for `p` even in `y`.
    pub fn apply_la(&self, a: &C) -> Result<Self> {
        if !self.is_even_in_y() {
            return Err(Error::WrongParity(
                "apply_la needs a polynomial even in y; write odd parts as v*y|y|^-a".into(),
            ));
        }
        let mut out = self.laplacian_x();
        for (e, c) in &self.terms {
            let b = e[self.n];
            if b >= 2 {
                let mut f = e.clone();
                f[self.n] -= 2;
                // ∂_yy y^b + (a/y) ∂_y y^b = b (b - 1 + a) y^{b-2}
                let k = C::from_int(b as i64) * (C::from_int(b as i64 - 1) + a.clone());
                out.add_term(f, c.clone() * k);
            }
        }
        Ok(out)
    }

    /// `⟨X, ∇p⟩`, equal to `k p` exactly when `p` is `k`-homogeneous.
    pub fn euler(&self) -> Self {
        let mut p = Self::zero(self.n);
        for (e, c) in &self.terms {
            let d: u32 = e.iter().sum();
            p.add_term(e.clone(), c.clone() * C::from_int(d as i64));
        }
        p
    }

    /// Embeds a polynomial on `Σ = R^n` (exponent vectors of length `n`) by
    /// appending `β = 0`.
    pub fn from_sigma(n: usize, terms: &[(Exponents, C)]) -> Self {
        Self::from_terms(n, terms.iter().map(|(e, c)| {
            let mut f = e.clone();
            f.push(0);
            (f, c.clone())
        }))
    }

    /// Restriction to `Σ`: the terms with `β = 0`.
    pub fn trace(&self) -> Self {
        Self::from_terms(self.n, self.terms.iter().filter(|(e, _)| e[self.n] == 0).map(|(e, c)| (e.clone(), c.clone())))
    }

    /// Adds `extra` trivial `x` variables after the existing ones.
    pub fn extend_dims(&self, extra: usize) -> Self {
        let n = self.n + extra;
        Self::from_terms(n, self.terms.iter().map(|(e, c)| {
            let mut f = e[..self.n].to_vec();
            f.extend(std::iter::repeat_n(0, extra));
            f.push(e[self.n]);
            (f, c.clone())
        }))
    }

    /// Float coefficients with the symbolic parameter (if any) set to `a`.
    pub fn to_float(&self, a: f64) -> FloatPoly {
        FloatPoly::new(self.n, self.terms.iter().map(|(e, c)| (e.clone(), c.to_f64_at(a))).collect())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MultiPoly<D> {
        MultiPoly::from_terms(self.n, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }
}

impl MultiPoly<RatFn> {
    /// Substitutes a rational value for the symbolic parameter.
    pub fn at(&self, a: &BigRational) -> Result<MultiPoly<BigRational>> {
        let mut p = MultiPoly::zero(self.n);
        for (e, c) in &self.terms {
            let v = c.eval_ratio(a).ok_or(Error::Pole(0))?;
            p.add_term(e.clone(), v);
        }
        Ok(p)
    }
}

/// Variable names `x, y` for `n = 1` and `x1, .., xn, y` otherwise.
pub fn var_names(n: usize) -> Vec<String> {
    let mut v: Vec<String> = if n == 1 { vec!["x".into()] } else { (1..=n).map(|i| format!("x{i}")).collect() };
    v.push("y".into());
    v
}

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = var_names(self.n);
        // highest degree first reads naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (e, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*{}", names[i])?,
                    _ => write!(f, "*{}^{p}", names[i])?,
                }
            }
        }
        Ok(())
    }
}

/// All exponent vectors of length `n` with total degree `k`, in lexicographic order.
pub fn monomials(n: usize, k: u32) -> Vec<Exponents> {
    fn rec(n: usize, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if cur.len() + 1 == n {
            cur.push(k);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for i in (0..=k).rev() {
            cur.push(i);
            rec(n, k - i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// Floating-point polynomial for fast evaluation of values and gradients.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPoly {
    n: usize,
    terms: Vec<(Exponents, f64)>,
}

impl FloatPoly {
    pub fn new(n: usize, terms: Vec<(Exponents, f64)>) -> Self {
        FloatPoly { n, terms }
    }

    pub fn zero(n: usize) -> Self {
        FloatPoly { n, terms: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Exponents, f64)] {
        &self.terms
    }

    pub fn scaled(&self, s: f64) -> Self {
        FloatPoly { n: self.n, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn value(&self, p: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(p).map(|(&k, &x)| x.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// Gradient written into `g` (length `n + 1`).
    pub fn gradient(&self, p: &[f64], g: &mut [f64]) {
        g.iter_mut().for_each(|v| *v = 0.0);
        for (e, c) in &self.terms {
            for i in 0..e.len() {
                if e[i] == 0 {
                    continue;
                }
                let mut t = c * e[i] as f64;
                for (j, (&k, &x)) in e.iter().zip(p).enumerate() {
                    let k = if j == i { k - 1 } else { k };
                    t *= x.powi(k as i32);
                }
                g[i] += t;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coeff::parse_ratio;

    type Q = BigRational;

    fn q(s: &str) -> Q {
        parse_ratio(s).unwrap()
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(1, 4), vec![vec![4]]);
    }

    #[test]
    fn la_residuals() {
        let a = q("1/3");
        let x: MultiPoly<Q> = MultiPoly::var(1, 0);
        assert!(x.apply_la(&a).unwrap().is_zero());
        let x2 = x.mul(&x);
        assert_eq!(x2.apply_la(&a).unwrap(), MultiPoly::constant(1, q("2")));
        let y: MultiPoly<Q> = MultiPoly::var(1, 1);
        assert!(matches!(y.apply_la(&a), Err(Error::WrongParity(_))));
        // y^2 -> 2 (1 + a)
        assert_eq!(y.mul(&y).apply_la(&a).unwrap(), MultiPoly::constant(1, q("8/3")));
    }

    #[test]
    fn euler_and_zero_storage() {
        let x: MultiPoly<Q> = MultiPoly::var(1, 0);
        let y: MultiPoly<Q> = MultiPoly::var(1, 1);
        let p = x.mul(&x).mul(&y).add(&y.mul(&y).mul(&y));
        assert_eq!(p.homogeneous_degree(), Some(3));
        assert_eq!(p.euler(), p.scale(&q("3")));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.sub(&p).num_terms(), 0);
    }

    #[test]
    fn float_gradient_matches_exact() {
        let x: MultiPoly<Q> = MultiPoly::var(2, 0);
        let z: MultiPoly<Q> = MultiPoly::var(2, 1);
        let y: MultiPoly<Q> = MultiPoly::var(2, 2);
        let p = x.mul(&z).mul(&y).add(&x.mul(&x).scale(&q("1/2")));
        let f = p.to_float(0.0);
        let pt = [0.3, -0.7, 0.2];
        let mut g = [0.0; 3];
        f.gradient(&pt, &mut g);
        for i in 0..3 {
            let exact = p.derivative(i).to_float(0.0).value(&pt);
            assert!((g[i] - exact).abs() < 1e-15);
        }
    }
}
