//! Explicit homogeneous `L_a`-harmonic polynomials: the planar even/odd
//! families, and the even-in-`y` extension of an arbitrary polynomial on `Σ`.

use super::coeff::Coeff;
use super::linalg;
use super::multi::{monomials, Exponents, MultiPoly};
use crate::error::{Error, Result};
use statrs::function::gamma::gamma;

fn factorial<C: Coeff>(k: u32) -> C {
    (1..=k as i64).fold(C::one(), |acc, i| acc * C::from_int(i))
}

/// `2i + a - 1`, failing when it vanishes.
fn shifted<C: Coeff>(i: u32, a: &C) -> Result<C> {
    let v = C::from_int(2 * i as i64 - 1) + a.clone();
    if v.is_zero() {
        Err(Error::Pole(i))
    } else {
        Ok(v)
    }
}

/// `c(m, a, t) = (-1)^{m-t} / ((2t)! 2^{m-t} (m-t)! Π_{i=1}^{m-t} (2i + a - 1))`,
/// the coefficient of `x^{2t} y^{2m-2t}` in [`planar_even`]`(2m)`.
pub fn coeff_c<C: Coeff>(m: u32, a: &C, t: u32) -> Result<C> {
    if t > m {
        return Err(Error::InvalidArgument(format!("need t <= m, got t = {t}, m = {m}")));
    }
    let j = m - t;
    let mut den = factorial::<C>(2 * t) * factorial::<C>(j);
    for i in 1..=j {
        den = den * C::from_int(2) * shifted(i, a)?;
    }
    let sign = if j % 2 == 0 { C::one() } else { -C::one() };
    Ok(sign / den)
}

/// Float evaluation of the Gamma-function form of [`coeff_c`].
pub fn coeff_c_gamma(m: u32, a: f64, t: u32) -> f64 {
    let j = (m - t) as i32;
    let h = 0.5 + 0.5 * a;
    let fact = |k: u32| (1..=k).map(|i| i as f64).product::<f64>();
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    sign * gamma(h) / (fact(2 * t) * fact(j as u32) * 4f64.powi(j) * gamma(j as f64 + h))
}

/// The planar even-degree solution `x^{2m}/(2m)! + Σ_{t<m} c(m,a,t) x^{2t} y^{2m-2t}` with `k = 2m`.
pub fn planar_even<C: Coeff>(k: u32, a: &C) -> Result<MultiPoly<C>> {
    if k % 2 != 0 {
        return Err(Error::WrongParity(format!("planar_even needs an even degree, got {k}")));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("planar_even needs k >= 2, got {k}")));
    }
    let m = k / 2;
    let mut p = MultiPoly::zero(1);
    for t in 0..=m {
        p.add_term(vec![2 * t, 2 * (m - t)], coeff_c(m, a, t)?);
    }
    Ok(p)
}

/// The planar odd-degree solution, the `x`-antiderivative of `planar_even(k-1)`;
/// `k = 1` gives `x`.
pub fn planar_odd<C: Coeff>(k: u32, a: &C) -> Result<MultiPoly<C>> {
    if k % 2 != 1 {
        return Err(Error::WrongParity(format!("planar_odd needs an odd degree, got {k}")));
    }
    if k == 1 {
        return Ok(MultiPoly::var(1, 0));
    }
    Ok(planar_even(k - 1, a)?.antiderivative(0))
}

/// Either planar family by the parity of `k`.
pub fn planar<C: Coeff>(k: u32, a: &C) -> Result<MultiPoly<C>> {
    if k % 2 == 0 {
        planar_even(k, a)
    } else {
        planar_odd(k, a)
    }
}

/// `c_{2k} = Π_{i=1}^{k} (2i - 1) / (2i - 1 + a)`.
pub fn garofalo_coeff<C: Coeff>(k: u32, a: &C) -> Result<C> {
    let mut c = C::one();
    for i in 1..=k {
        c = c * C::from_int(2 * i as i64 - 1) / shifted(i, a)?;
    }
    Ok(c)
}

/// The unique even-in-`y` `L_a`-harmonic polynomial `q` with `q(x, 0) = p(x)`:
/// `q = Σ_k (-1)^k c_{2k} Δ^k p y^{2k} / (2k)!`.
///
/// `p` is given on `R^{n+1}` with no `y` dependence (see [`MultiPoly::from_sigma`]).
pub fn garofalo_extend<C: Coeff>(p: &MultiPoly<C>, a: &C) -> Result<MultiPoly<C>> {
    if !p.is_y_independent() {
        return Err(Error::InvalidArgument("garofalo_extend needs a polynomial on Σ (no y)".into()));
    }
    let n = p.n();
    let mut out = MultiPoly::zero(n);
    let mut lap = p.clone();
    let mut k = 0u32;
    while !lap.is_zero() {
        let mut e = vec![0; n + 1];
        e[n] = 2 * k;
        let yk = MultiPoly::monomial(e, C::one());
        let mut c = garofalo_coeff(k, a)? / factorial::<C>(2 * k);
        if k % 2 == 1 {
            c = -c;
        }
        out = out.add(&lap.mul(&yk).scale(&c));
        lap = lap.laplacian_x();
        k += 1;
    }
    Ok(out)
}

/// Extension by solving `L_a q = 0, q(x,0) = p` on the monomial basis, for
/// homogeneous `p`. Returns the solution together with the kernel dimension of
/// the constraint system (zero means the extension is unique).
pub fn garofalo_extend_by_system<C: Coeff>(p: &MultiPoly<C>, a: &C) -> Result<(MultiPoly<C>, usize)> {
    let n = p.n();
    let d = p
        .homogeneous_degree()
        .ok_or_else(|| Error::InvalidArgument("need a nonzero homogeneous polynomial".into()))?;
    // unknowns: x^α y^{2j}, j >= 1, |α| + 2j = d
    let mut cols: Vec<Exponents> = Vec::new();
    for j in 1..=d / 2 {
        for mut e in monomials(n, d - 2 * j) {
            e.push(2 * j);
            cols.push(e);
        }
    }
    let rhs_poly = p.apply_la(a)?.neg();
    let images: Vec<MultiPoly<C>> = cols.iter().map(|e| MultiPoly::monomial(e.clone(), C::one()).apply_la(a)).collect::<Result<_>>()?;
    let mut rows: Vec<Exponents> = Vec::new();
    if d >= 2 {
        for j in 0..=(d - 2) / 2 {
            for mut e in monomials(n, d - 2 - 2 * j) {
                e.push(2 * j);
                rows.push(e);
            }
        }
    }
    let mat: Vec<Vec<C>> = rows.iter().map(|r| images.iter().map(|img| img.coeff(r)).collect()).collect();
    let rhs: Vec<C> = rows.iter().map(|r| rhs_poly.coeff(r)).collect();
    let kernel = if cols.is_empty() { 0 } else { linalg::nullity(&mat, cols.len()) };
    if cols.is_empty() {
        return Ok((p.clone(), 0));
    }
    let sol = linalg::solve(&mat, &rhs)?;
    let mut q = p.clone();
    for (e, c) in cols.into_iter().zip(sol) {
        q.add_term(e, c);
    }
    Ok((q, kernel))
}

/// Garofalo extensions of the monomial basis `{x^α : |α| = k}` of `R^n`,
/// a basis of the symmetric homogeneous degree-`k` solutions.
pub fn symmetric_basis<C: Coeff>(n: usize, k: u32, a: &C) -> Result<Vec<MultiPoly<C>>> {
    monomials(n, k)
        .into_iter()
        .map(|e| garofalo_extend(&MultiPoly::from_sigma(n, &[(e, C::one())]), a))
        .collect()
}

/// Terminating `₂F₁(-N, b; c; z)` with `N` a nonnegative integer, as a list of
/// the series coefficients `(−N)_j (b)_j / ((c)_j j!)`.
pub fn hyp2f1_terminating_coeffs(neg_n: u32, b: f64, c: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(neg_n as usize + 1);
    let mut t = 1.0;
    for j in 0..=neg_n {
        out.push(t);
        let jf = j as f64;
        t *= (jf - neg_n as f64) * (b + jf) / ((c + jf) * (jf + 1.0));
    }
    out
}

/// `₂F₁(-N, b; c; z)` by its finite series.
pub fn hyp2f1_terminating(neg_n: u32, b: f64, c: f64, z: f64) -> f64 {
    hyp2f1_terminating_coeffs(neg_n, b, c).iter().rev().fold(0.0, |acc, &t| acc * z + t)
}

/// Even planar family from its hypergeometric closed form, as float
/// coefficients of `x^{2j} y^{k-2j}` (index `j`).
pub fn planar_even_hyp_coeffs(k: u32, a: f64) -> Vec<f64> {
    let kf = k as f64;
    let h = 0.5 + 0.5 * a;
    let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let pref = sign * gamma(h) / (2f64.powi(k as i32) * gamma(1.0 + kf / 2.0) * gamma(h + kf / 2.0));
    hyp2f1_terminating_coeffs(k / 2, -kf / 2.0 - a / 2.0 + 0.5, 0.5)
        .into_iter()
        .enumerate()
        .map(|(j, c)| pref * c * if j % 2 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Odd planar family from its hypergeometric closed form, as float
/// coefficients of `x^{2j+1} y^{k-1-2j}` (index `j`).
pub fn planar_odd_hyp_coeffs(k: u32, a: f64) -> Vec<f64> {
    let kf = k as f64;
    let h = 0.5 + 0.5 * a;
    let sign = if k.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
    let pref = -sign * gamma(h) / (2f64.powi(k as i32 - 1) * gamma(0.5 + kf / 2.0) * gamma(a / 2.0 + kf / 2.0));
    hyp2f1_terminating_coeffs((k - 1) / 2, 1.0 - kf / 2.0 - a / 2.0, 1.5)
        .into_iter()
        .enumerate()
        .map(|(j, c)| pref * c * if j % 2 == 0 { 1.0 } else { -1.0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coeff::{parse_ratio, RatFn};
    use num::rational::BigRational;
    use num::{One, Zero};

    type Q = BigRational;

    fn q(s: &str) -> Q {
        parse_ratio(s).unwrap()
    }

    const AS: [&str; 5] = ["-1/2", "-1/4", "0", "1/4", "1/2"];

    #[test]
    fn coeff_examples() {
        let a = RatFn::var();
        // -1/(2(1+a))
        let expect = -(RatFn::one() / (RatFn::from_int(2) * (RatFn::one() + a.clone())));
        assert_eq!(coeff_c(1, &a, 0).unwrap(), expect);
        assert_eq!(coeff_c(1, &a, 1).unwrap(), RatFn::from_ratio(&q("1/2")));
        assert_eq!(coeff_c(1, &q("0"), 0).unwrap(), q("-1/2"));
        assert_eq!(coeff_c(2, &q("-3"), 0), Err(Error::Pole(2)));
    }

    #[test]
    fn coeff_gamma_form_agrees() {
        for m in 0..6 {
            for t in 0..=m {
                for a in AS {
                    let exact = coeff_c(m, &q(a), t).unwrap();
                    let f = crate::poly::coeff::ratio_to_f64(&exact);
                    let g = coeff_c_gamma(m, crate::poly::coeff::ratio_to_f64(&q(a)), t);
                    assert!((f - g).abs() <= 1e-13 * f.abs(), "m={m} t={t} a={a}: {f} vs {g}");
                }
            }
        }
    }

    #[test]
    fn planar_examples() {
        let a = RatFn::var();
        let p2 = planar_even(2, &a).unwrap();
        assert!(p2.apply_la(&a).unwrap().is_zero());
        let p2_0 = planar_even(2, &q("0")).unwrap();
        let x: MultiPoly<Q> = MultiPoly::var(1, 0);
        let y: MultiPoly<Q> = MultiPoly::var(1, 1);
        assert_eq!(p2_0, x.mul(&x).sub(&y.mul(&y)).scale(&q("1/2")));
        let p3 = planar_odd(3, &q("0")).unwrap();
        assert_eq!(p3, x.mul(&x).mul(&x).scale(&q("1/6")).sub(&x.mul(&y).mul(&y).scale(&q("1/2"))));
        assert!(matches!(planar_even(3, &q("0")), Err(Error::WrongParity(_))));
        for k in [3, 5, 7] {
            assert!(planar_odd(k, &a).unwrap().apply_la(&a).unwrap().is_zero());
        }
    }

    #[test]
    fn symbolic_families_are_harmonic() {
        let a = RatFn::var();
        for k in 2..=10 {
            let p = planar(k, &a).unwrap();
            assert_eq!(p.homogeneous_degree(), Some(k));
            assert!(p.apply_la(&a).unwrap().is_zero(), "k={k}");
            assert_eq!(p.euler(), p.scale(&RatFn::from_int(k as i64)));
        }
    }

    #[test]
    fn garofalo_examples() {
        let a = RatFn::var();
        let half = RatFn::from_ratio(&q("1/2"));
        let p = MultiPoly::from_sigma(2, &[(vec![2, 0], half.clone())]);
        let qq = garofalo_extend(&p, &a).unwrap();
        let expect = MultiPoly::from_terms(
            2,
            [(vec![2, 0, 0], half.clone()), (vec![0, 0, 2], -(half / (RatFn::one() + a.clone())))],
        );
        assert_eq!(qq, expect);
        // harmonic input is unchanged
        let h = MultiPoly::from_sigma(2, &[(vec![2, 0], RatFn::one()), (vec![0, 2], -RatFn::one())]);
        assert_eq!(garofalo_extend(&h, &a).unwrap(), h);
        // x1^2 x2^2 has four terms and matches the linear-system extension
        for s in AS {
            let av = q(s);
            let p = MultiPoly::from_sigma(2, &[(vec![2, 2], Q::one())]);
            let g = garofalo_extend(&p, &av).unwrap();
            assert_eq!(g.num_terms(), 4);
            assert!(g.apply_la(&av).unwrap().is_zero());
            let (sys, kernel) = garofalo_extend_by_system(&p, &av).unwrap();
            assert_eq!(kernel, 0);
            assert_eq!(sys, g);
        }
    }

    #[test]
    fn hypergeometric_cross_check() {
        for k in 1..=8u32 {
            for s in AS {
                let av = q(s);
                let af = crate::poly::coeff::ratio_to_f64(&av);
                let p = planar(k, &av).unwrap();
                let hyp = if k % 2 == 0 { planar_even_hyp_coeffs(k, af) } else { planar_odd_hyp_coeffs(k, af) };
                for (j, h) in hyp.iter().enumerate() {
                    let j = j as u32;
                    let e = if k % 2 == 0 { vec![2 * j, k - 2 * j] } else { vec![2 * j + 1, k - 1 - 2 * j] };
                    let exact = crate::poly::coeff::ratio_to_f64(&p.coeff(&e));
                    assert!((exact - h).abs() <= 1e-10 * exact.abs().max(1e-300), "k={k} a={s} j={j}: {exact} vs {h}");
                }
            }
        }
    }

    #[test]
    fn hyp_series_value() {
        // 2F1(-2, 1; 1/2; z) = 1 - 4z + (8/3) z^2... check at z = 0.5 against the sum
        let v = hyp2f1_terminating(2, 1.0, 0.5, 0.5);
        let direct = 1.0 + (-2.0 * 1.0 / 0.5) * 0.5 + ((-2.0 * -1.0) * (1.0 * 2.0) / (0.5 * 1.5 * 2.0)) * 0.25;
        assert!((v - direct).abs() < 1e-15);
        assert!(hyp2f1_terminating(0, 3.0, 2.0, 10.0) == 1.0);
        assert!(!hyp2f1_terminating(3, 0.3, 0.5, -2.0).is_nan());
        assert!(Q::zero().is_zero());
    }
}
