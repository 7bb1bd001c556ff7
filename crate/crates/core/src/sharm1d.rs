//! One-dimensional `s`-harmonic functions in `(-1, 1)` built from exterior data
//! `f(x) = (x² - 1)^s g(1/x)`, with a prescribed vanishing order at 0.
//!
//! For `|x| < 1` the Poisson formula for the interval gives
//! `u(x) = K (1 - x²)^s Σ_m A_m x^m`, `K = 2 sin(πs)/π`, where
//! `A_{2n} = ∫_0^1 g_e(t) t^{2n-1} dt` and `A_{2n+1} = ∫_0^1 g_o(t) t^{2n} dt`.

use crate::error::{Error, Result};
use crate::extension::{cns_const, frac_laplacian_direct, Datum};
use crate::poly::linalg;
use crate::poly::{ratio_to_f64, UPoly, Q};
use crate::quadrature::{tanh_sinh, Estimate};
use num::{One, Zero};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// `2 sin(πs)/π`, the Poisson prefactor `2Γ(1/2) sin(πs)/π^{3/2}`.
pub fn prefactor(s: f64) -> f64 {
    2.0 * (PI * s).sin() / PI
}

/// Even and odd parts of a polynomial.
pub fn split_parity(g: &UPoly) -> (UPoly, UPoly) {
    let pick = |odd: usize| {
        UPoly::from_coeffs(g.0.iter().enumerate().map(|(i, c)| if i % 2 == odd { c.clone() } else { Q::zero() }).collect())
    };
    (pick(0), pick(1))
}

/// Exterior datum `(x² - 1)^s g(1/x)` with polynomial `g`, `g(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailData {
    pub g: UPoly,
    pub s: f64,
}

impl TailData {
    pub fn new(g: UPoly, s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidArgument(format!("s must lie in (0, 1), got {s}")));
        }
        if g.0.first().is_some_and(|c| !c.is_zero()) {
            return Err(Error::InvalidArgument("g_e(0) must vanish for A_0 to exist".into()));
        }
        Ok(TailData { g, s })
    }

    /// `f(y)` for `|y| >= 1`.
    pub fn exterior(&self, y: f64) -> f64 {
        let q = (y.abs() - 1.0) * (y.abs() + 1.0);
        q.max(0.0).powf(self.s) * self.g.eval_f64(1.0 / y)
    }
}

/// Exact moments `A_0 ..= A_m`.
pub fn moments(g: &UPoly, m: usize) -> Result<Vec<Q>> {
    if g.0.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::InvalidArgument("g_e(0) must vanish for A_0 to exist".into()));
    }
    Ok((0..=m)
        .map(|i| {
            // A_i = Σ_j c_j / (j + i) over j ≡ i (mod 2), j >= 1
            let mut acc = Q::zero();
            for (j, c) in g.0.iter().enumerate().skip(1) {
                if j % 2 == i % 2 && !c.is_zero() {
                    acc += c.clone() / Q::from_integer(((j + i) as i64).into());
                }
            }
            acc
        })
        .collect())
}

/// Polynomial `g` with `A_i = 0` for `i < k` and `A_k ≠ 0`.
///
/// Even `k` uses the even basis `y², y⁴, ...` and odd `k` the odd basis
/// `y, y³, ...`; the other parity is left zero, which clears its moments
/// outright. The lowest coefficient is fixed to 1 and the remaining ones
/// solve the square moment system exactly.
pub fn construct_order(k: u32, s: f64) -> Result<TailData> {
    if k == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let odd = k % 2 == 1;
    // constraints: A_i = 0 for i < k with i of the same parity as k
    let cons: Vec<usize> = (0..k as usize).filter(|i| (i % 2 == 1) == odd).collect();
    let first = if odd { 1 } else { 2 };
    let exps: Vec<usize> = (0..=cons.len()).map(|j| first + 2 * j).collect();
    let moment = |e: usize, i: usize| Q::one() / Q::from_integer(((e + i) as i64).into());
    let mut coeffs = vec![Q::one()];
    if !cons.is_empty() {
        let a: Vec<Vec<Q>> = cons.iter().map(|&i| exps[1..].iter().map(|&e| moment(e, i)).collect()).collect();
        let b: Vec<Q> = cons.iter().map(|&i| -moment(exps[0], i)).collect();
        coeffs.extend(linalg::solve(&a, &b)?);
    }
    let mut dense = vec![Q::zero(); exps[exps.len() - 1] + 1];
    for (e, c) in exps.iter().zip(coeffs) {
        dense[*e] = c;
    }
    let g = UPoly::from_coeffs(dense);
    let m = moments(&g, k as usize)?;
    if m[..k as usize].iter().any(|v| !v.is_zero()) || m[k as usize].is_zero() {
        return Err(Error::Singular);
    }
    TailData::new(g, s)
}

/// Exterior data on `R \ (-1, 1)`.
#[derive(Clone)]
pub enum Exterior {
    Tail(TailData),
    /// A general function with `|f(y)| <= C |y|^exponent`, `exponent < 2s`.
    General { f: Arc<dyn Fn(f64) -> f64 + Send + Sync>, exponent: f64 },
}

impl Exterior {
    pub fn general<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F, exponent: f64) -> Self {
        Exterior::General { f: Arc::new(f), exponent }
    }

    fn eval(&self, y: f64) -> f64 {
        match self {
            Exterior::Tail(t) => t.exterior(y),
            Exterior::General { f, .. } => f(y),
        }
    }
}

/// `1 - x² t²` without cancellation near `|x| t = 1`.
fn one_minus(x: f64, t: f64, gap_hi: f64) -> f64 {
    let ax = x.abs();
    ((1.0 - ax) + ax * gap_hi) * (1.0 + ax * t)
}

/// `u(x)` for `|x| < 1` from the Poisson formula.
pub fn poisson_eval_1d(ext: &Exterior, x: f64, s: f64) -> Result<Estimate> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!("s must lie in (0, 1), got {s}")));
    }
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(vec![x], "the Poisson formula needs |x| < 1".into()));
    }
    let tol = 1e-15;
    let inner = match ext {
        Exterior::Tail(t) => {
            let (ge, go) = split_parity(&t.g);
            // g_e(t)/t has integer exponents since g_e(0) = 0
            let ge_t: Vec<f64> = ge.0.iter().skip(1).map(ratio_to_f64).collect();
            let go_f: Vec<f64> = go.0.iter().map(ratio_to_f64).collect();
            let horner = |c: &[f64], t: f64| c.iter().rev().fold(0.0, |a, v| a * t + v);
            tanh_sinh::integrate_gaps(
                |t, _, hi| (horner(&ge_t, t) + x * horner(&go_f, t)) / one_minus(x, t, hi),
                0.0,
                1.0,
                tol,
            )
        }
        Exterior::General { exponent, .. } => {
            if *exponent >= 2.0 * s {
                return Err(Error::Divergent(format!("exterior growth {exponent} is not below 2s")));
            }
            // y = 1/t over (0, 1)
            tanh_sinh::integrate_gaps(
                |t, lo, hi| {
                    let y = 1.0 / t;
                    let (fp, fm) = (ext.eval(y), ext.eval(-y));
                    let fe = 0.5 * (fp + fm);
                    let fo = 0.5 * (fp - fm);
                    let w = lo.powf(2.0 * s) * (hi * (2.0 - hi)).powf(-s);
                    w * (fe / t + x * fo) / one_minus(x, t, hi)
                },
                0.0,
                1.0,
                tol,
            )
        }
    };
    let pre = prefactor(s) * ((1.0 - x.abs()) * (1.0 + x.abs())).powf(s);
    Ok(Estimate { value: pre * inner.value, error: pre * inner.error + 4.0 * f64::EPSILON * (pre * inner.value).abs() })
}

/// `K (1 - x²)^s Σ_{m<=terms} A_m x^m` with the truncation bound
/// `|A_m| <= max|g| / m` applied to the geometric remainder.
pub fn series_eval_1d(t: &TailData, x: f64, terms: usize) -> Result<Estimate> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(vec![x], "the series needs |x| < 1".into()));
    }
    let a = moments(&t.g, terms)?;
    let sum: f64 = a.iter().enumerate().map(|(m, v)| ratio_to_f64(v) * x.powi(m as i32)).sum();
    let gmax: f64 = t.g.0.iter().map(|c| ratio_to_f64(c).abs()).sum();
    let m1 = (terms + 1) as f64;
    let rem = gmax / m1 * x.abs().powf(m1) / (1.0 - x.abs());
    let pre = prefactor(t.s) * (1.0 - x * x).powf(t.s);
    Ok(Estimate { value: pre * sum, error: pre * rem })
}

/// The solution on all of `R`: the Poisson formula inside, the datum outside.
#[derive(Clone)]
pub struct SHarmonic1d {
    pub exterior: Exterior,
    pub s: f64,
}

impl SHarmonic1d {
    pub fn new(exterior: Exterior, s: f64) -> Self {
        SHarmonic1d { exterior, s }
    }

    pub fn from_tail(t: TailData) -> Self {
        let s = t.s;
        SHarmonic1d { exterior: Exterior::Tail(t), s }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.abs() >= 1.0 {
            Ok(self.exterior.eval(x))
        } else {
            Ok(poisson_eval_1d(&self.exterior, x, self.s)?.value)
        }
    }

    fn growth(&self) -> f64 {
        match &self.exterior {
            // f ~ |y|^{2s-1} since g(0) = 0
            Exterior::Tail(_) => (2.0 * self.s - 1.0).max(0.0),
            Exterior::General { exponent, .. } => *exponent,
        }
    }

    /// The function as a datum on `R` with breakpoints at `±1`.
    pub fn to_datum(&self) -> Datum {
        let me = self.clone();
        Datum::growth(1, self.growth(), 1.0, move |x: &[f64]| me.eval(x[0]).unwrap_or(f64::NAN)).with_breakpoints(vec![-1.0, 1.0])
    }
}

/// Settings for [`verify_order`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub r_min: f64,
    pub r_max: f64,
    pub radii: usize,
    pub slope_tol: f64,
    pub points: Vec<f64>,
    /// Residual bound relative to the field scale.
    pub residual_tol: f64,
    /// Half-width of the Chebyshev fit window.
    pub taylor_window: f64,
    pub taylor_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            r_min: 1e-3,
            r_max: 1e-1,
            radii: 13,
            slope_tol: 0.05,
            points: vec![0.0, 0.3, -0.3, 0.6, -0.6],
            residual_tol: 1e-5,
            taylor_window: 0.5,
            taylor_tol: 1e-8,
        }
    }
}

/// Evidence that a constructed function vanishes to order `k` and is
/// `s`-harmonic in `(-1, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderReport {
    pub k: u32,
    pub s: f64,
    /// Log-log slope of `u(r)² + u(-r)²`.
    pub slope: f64,
    pub slope_ok: bool,
    /// `(x, (-Δ)^s u(x))`.
    pub residuals: Vec<(f64, f64)>,
    /// `max |u|` over `[-3, 3]`.
    pub scale: f64,
    pub harmonic_ok: bool,
    /// Taylor coefficients `c_0 ..= c_k` at 0 from the Chebyshev fit.
    pub taylor: Vec<f64>,
    pub taylor_ok: bool,
    pub passed: bool,
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Monomial coefficients at 0 of the Chebyshev interpolant on `[-w, w]`.
fn taylor_by_chebyshev(f: &dyn Fn(f64) -> Result<f64>, w: f64, upto: usize) -> Result<Vec<f64>> {
    const N: usize = 24;
    let xi: Vec<f64> = (0..N).map(|j| (PI * (j as f64 + 0.5) / N as f64).cos()).collect();
    let vals: Vec<f64> = xi.iter().map(|&t| f(w * t)).collect::<Result<_>>()?;
    let cheb: Vec<f64> = (0..N)
        .map(|n| {
            let c: f64 = (0..N).map(|j| vals[j] * (n as f64 * PI * (j as f64 + 0.5) / N as f64).cos()).sum();
            c * 2.0 / N as f64 * if n == 0 { 0.5 } else { 1.0 }
        })
        .collect();
    // monomial coefficients of T_n via the three-term recurrence
    let mut t_prev = vec![0.0; N];
    let mut t_cur = vec![0.0; N];
    t_prev[0] = 1.0;
    t_cur[1] = 1.0;
    let mut mono = vec![0.0; N];
    for (i, v) in t_prev.iter().enumerate() {
        mono[i] += cheb[0] * v;
    }
    for (i, v) in t_cur.iter().enumerate() {
        mono[i] += cheb[1] * v;
    }
    for c in cheb.iter().skip(2) {
        let mut nxt = vec![0.0; N];
        for i in 0..N - 1 {
            nxt[i + 1] += 2.0 * t_cur[i];
        }
        for i in 0..N {
            nxt[i] -= t_prev[i];
        }
        for (i, v) in nxt.iter().enumerate() {
            mono[i] += c * v;
        }
        t_prev = std::mem::replace(&mut t_cur, nxt);
    }
    Ok((0..=upto).map(|i| mono[i] / w.powi(i as i32)).collect())
}

/// Checks the vanishing order and `s`-harmonicity of `u`.
pub fn verify_order(u: &SHarmonic1d, k: u32, opts: &VerifyOptions) -> Result<OrderReport> {
    let s = u.s;
    let m = opts.radii.max(2);
    let ratio = (opts.r_max / opts.r_min).powf(1.0 / (m as f64 - 1.0));
    let rs: Vec<f64> = (0..m).map(|i| opts.r_min * ratio.powi(i as i32)).collect();
    let mut lx = Vec::with_capacity(m);
    let mut ly = Vec::with_capacity(m);
    for &r in &rs {
        let h = u.eval(r)?.powi(2) + u.eval(-r)?.powi(2);
        if h > 0.0 {
            lx.push(r.ln());
            ly.push(h.ln());
        }
    }
    let slope = if lx.len() >= 2 { fit_slope(&lx, &ly) } else { f64::INFINITY };
    let slope_ok = (slope - 2.0 * k as f64).abs() <= opts.slope_tol;

    let scale = (0..=600).map(|i| -3.0 + 0.01 * i as f64).map(|x| u.eval(x).map(f64::abs)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    let datum = u.to_datum();
    let mut residuals = Vec::new();
    for &x in &opts.points {
        residuals.push((x, frac_laplacian_direct(&datum, x, s, 1e-14)?.value));
    }
    let harmonic_ok = residuals.iter().all(|(_, r)| r.abs() <= opts.residual_tol * scale);

    let taylor = taylor_by_chebyshev(&|x| u.eval(x), opts.taylor_window, k as usize)?;
    let w = opts.taylor_window;
    let local = (0..=200).map(|i| -w + w * i as f64 / 100.0).map(|x| u.eval(x).map(f64::abs)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    let taylor_ok = taylor[..k as usize].iter().enumerate().all(|(i, c)| (c * w.powi(i as i32)).abs() <= opts.taylor_tol * local)
        && (taylor[k as usize] * w.powi(k as i32)).abs() > opts.taylor_tol * local;
    let _ = cns_const(1, s)?;
    Ok(OrderReport { k, s, slope, slope_ok, residuals, scale, harmonic_ok, taylor, taylor_ok, passed: slope_ok && harmonic_ok && taylor_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_ratio;

    fn poly(c: &[&str]) -> UPoly {
        UPoly::from_coeffs(c.iter().map(|v| parse_ratio(v).unwrap()).collect())
    }

    #[test]
    fn moment_examples() {
        let m = moments(&poly(&["0", "0", "1"]), 3).unwrap();
        assert_eq!(m, vec![parse_ratio("1/2").unwrap(), Q::zero(), parse_ratio("1/4").unwrap(), Q::zero()]);
        let m = moments(&poly(&["0", "1"]), 2).unwrap();
        assert_eq!(m, vec![Q::zero(), parse_ratio("1/2").unwrap(), Q::zero()]);
        let m = moments(&poly(&["0", "0", "1", "0", "-2"]), 2).unwrap();
        assert_eq!(m[0], Q::zero());
        assert_eq!(m[2], parse_ratio("-1/12").unwrap());
        assert!(moments(&poly(&["1"]), 2).is_err());
    }

    #[test]
    fn constructions() {
        assert_eq!(construct_order(2, 0.5).unwrap().g, poly(&["0", "0", "1", "0", "-2"]));
        assert_eq!(construct_order(1, 0.5).unwrap().g, poly(&["0", "1"]));
        for k in 1..=7 {
            let t = construct_order(k, 0.25).unwrap();
            let m = moments(&t.g, k as usize).unwrap();
            assert!(m[..k as usize].iter().all(|v| v.is_zero()));
            assert!(!m[k as usize].is_zero());
        }
        assert!(construct_order(0, 0.5).is_err());
    }

    #[test]
    fn unit_and_odd_data() {
        for s in [0.25, 0.5, 0.75] {
            let one = Exterior::general(|_| 1.0, 0.0);
            for x in [0.0, 0.5, -0.9, 0.999] {
                let v = poisson_eval_1d(&one, x, s).unwrap().value;
                assert!((v - 1.0).abs() < 1e-12, "s={s} x={x} {v}");
            }
            let odd = Exterior::general(move |y| y.signum() * (y * y - 1.0).powf(0.5 * s), s);
            assert_eq!(poisson_eval_1d(&odd, 0.0, s).unwrap().value, 0.0);
            let l = poisson_eval_1d(&odd, 0.4, s).unwrap().value;
            let r = poisson_eval_1d(&odd, -0.4, s).unwrap().value;
            assert!((l + r).abs() < 1e-12);
        }
        assert!(poisson_eval_1d(&Exterior::general(|_| 1.0, 0.0), 1.0, 0.5).is_err());
    }

    #[test]
    fn quadrature_matches_series() {
        // g = y²: u(0) = K A_0 = K/2
        let t = TailData::new(poly(&["0", "0", "1"]), 0.3).unwrap();
        let u0 = poisson_eval_1d(&Exterior::Tail(t.clone()), 0.0, 0.3).unwrap().value;
        assert!((u0 - prefactor(0.3) * 0.5).abs() < 1e-15);
        let t = TailData::new(poly(&["0", "1", "3", "-2", "1/2"]), 0.3).unwrap();
        for x in [-0.5, -0.2, 0.1, 0.45] {
            let q = poisson_eval_1d(&Exterior::Tail(t.clone()), x, 0.3).unwrap().value;
            let se = series_eval_1d(&t, x, 80).unwrap();
            assert!((q - se.value).abs() < 1e-8 && se.error < 1e-8, "{q} {se:?}");
        }
        // parity of the solution follows g
        let e = SHarmonic1d::from_tail(TailData::new(poly(&["0", "0", "1"]), 0.6).unwrap());
        assert!((e.eval(0.3).unwrap() - e.eval(-0.3).unwrap()).abs() < 1e-12);
        let o = SHarmonic1d::from_tail(TailData::new(poly(&["0", "1"]), 0.6).unwrap());
        assert!((o.eval(0.3).unwrap() + o.eval(-0.3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn prescribed_order_is_verified() {
        let u = SHarmonic1d::from_tail(construct_order(2, 0.5).unwrap());
        let r = verify_order(&u, 2, &VerifyOptions::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.slope - 4.0).abs() < 0.05);
        let one = SHarmonic1d::new(Exterior::general(|_| 1.0, 0.0), 0.5);
        let r = verify_order(&one, 0, &VerifyOptions::default()).unwrap();
        assert!(r.slope.abs() < 1e-10 && r.harmonic_ok);
    }

    #[test]
    fn construction_grid() {
        for k in 1..=3 {
            for s in [0.25, 0.5, 0.75] {
                let u = SHarmonic1d::from_tail(construct_order(k, s).unwrap());
                let r = verify_order(&u, k, &VerifyOptions::default()).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
    }
}
