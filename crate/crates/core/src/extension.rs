//! Poisson-kernel extension for `(-Δ)^s`, its Dirichlet-to-Neumann limit, and
//! the direct principal-value integral.
//!
//! Boundary data live on `R^n` (`n ∈ {1, 2}` for the extension, `n = 1` for
//! the direct integral). Integrals over `R^n` are reduced to one-dimensional
//! radial integrals of the spherical average of `u(x + tω) - u(x)`, which
//! vanishes at `t = 0` and cancels odd terms exactly.

use crate::error::{Error, Result};
use crate::poly::FloatPoly;
use crate::quadrature::{plain_sphere_area, tanh_sinh, Estimate};
use serde::Serialize;
use statrs::function::gamma::gamma;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

/// Order `s` and dimension `n`, with the derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FracParam {
    pub s: f64,
    pub n: usize,
    /// `1 - 2s`.
    pub a: f64,
    pub c_ns: f64,
    pub gamma_ns: f64,
}

impl FracParam {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        check_s(s)?;
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(FracParam { s, n, a: 1.0 - 2.0 * s, c_ns: cns_const(n, s)?, gamma_ns: gamma_closed(n, s) })
    }

    /// `C(n,s)/γ(n,s) = 2^{2s} s Γ(s)/Γ(1-s)`, the factor multiplying the
    /// `y^{2s}` coefficient of the extension.
    pub fn dtn_factor(&self) -> f64 {
        self.c_ns / self.gamma_ns
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!("s must lie in (0, 1), got {s}")));
    }
    Ok(())
}

fn gamma_closed(n: usize, s: f64) -> f64 {
    let h = n as f64 / 2.0;
    gamma(h + s) / (PI.powf(h) * gamma(s))
}

/// `∫_0^{π/2} sin^{n-1}φ cos^{2s-1}φ dφ` by tanh-sinh, accurate at both ends.
fn angular_profile_integral(n: usize, s: f64, tol: f64) -> Estimate {
    tanh_sinh::integrate_gaps(
        |_, lo, hi| {
            // φ = lo from 0, π/2 - φ = hi
            let sin = if lo < hi { lo.sin() } else { hi.cos() };
            let cos = if hi < lo { hi.sin() } else { lo.cos() };
            sin.powi(n as i32 - 1) * cos.powf(2.0 * s - 1.0)
        },
        0.0,
        FRAC_PI_2,
        tol,
    )
}

/// `γ(n,s) = (∫_{R^n} (|η|²+1)^{-(n/2+s)} dη)^{-1}`.
///
/// The value is the closed form `Γ(n/2+s)/(π^{n/2}Γ(s))`; the error field is
/// its distance to the reciprocal of a tanh-sinh evaluation of the integral.
pub fn gamma_const(n: usize, s: f64) -> Result<Estimate> {
    check_s(s)?;
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let v = gamma_closed(n, s);
    let area = if n == 1 { 2.0 } else { plain_sphere_area(n - 1) };
    let q = angular_profile_integral(n, s, 1e-15);
    let iv = area * q.value;
    Ok(Estimate { value: v, error: (v - 1.0 / iv).abs() + q.error / (iv * iv) })
}

/// `C(n,s) = 2^{2s} s Γ(n/2+s) / (π^{n/2} Γ(1-s))`.
pub fn cns_const(n: usize, s: f64) -> Result<f64> {
    check_s(s)?;
    let h = n as f64 / 2.0;
    Ok(4f64.powf(s) * s * gamma(h + s) / (PI.powf(h) * gamma(1.0 - s)))
}

/// Decay class of a boundary datum.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Decay {
    /// Supported in the ball of this radius about the origin.
    Compact { radius: f64 },
    /// `|u(x)| <= bound (1 + |x|)^exponent`.
    Growth { exponent: f64, bound: f64 },
    /// A polynomial. Tails beyond the admissible growth are taken as the
    /// analytic continuation in `s` of the kernel moments, which is the
    /// polynomial `L_a`-harmonic extension.
    Polynomial { degree: u32 },
}

/// Boundary datum on `R^n`.
#[derive(Clone)]
pub struct Datum {
    pub n: usize,
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    pub decay: Decay,
    /// Points of reduced smoothness (1-D only); quadrature splits there.
    pub breakpoints: Vec<f64>,
    poly: Option<FloatPoly>,
}

impl std::fmt::Debug for Datum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Datum").field("n", &self.n).field("decay", &self.decay).finish()
    }
}

impl Datum {
    pub fn compact<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(n: usize, radius: f64, f: F) -> Self {
        Datum { n, f: Arc::new(f), decay: Decay::Compact { radius }, breakpoints: Vec::new(), poly: None }
    }

    pub fn growth<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(n: usize, exponent: f64, bound: f64, f: F) -> Self {
        Datum { n, f: Arc::new(f), decay: Decay::Growth { exponent, bound }, breakpoints: Vec::new(), poly: None }
    }

    /// The trace on `Σ` (terms without `y`) of a polynomial in `n + 1` variables.
    pub fn polynomial(p: &FloatPoly) -> Self {
        let n = p.n();
        let terms: Vec<(Vec<u32>, f64)> = p.terms().iter().filter(|(e, _)| e[n] == 0).cloned().collect();
        let trace = FloatPoly::new(n, terms);
        let degree = trace.degree();
        let q = trace.clone();
        Datum {
            n,
            f: Arc::new(move |x: &[f64]| {
                let mut pt = x.to_vec();
                pt.push(0.0);
                q.value(&pt)
            }),
            decay: Decay::Polynomial { degree },
            breakpoints: Vec::new(),
            poly: Some(trace),
        }
    }

    pub fn with_breakpoints(mut self, b: Vec<f64>) -> Self {
        self.breakpoints = b;
        self
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn check(&self, s: f64) -> Result<()> {
        if let Decay::Growth { exponent, .. } = self.decay {
            if exponent >= 2.0 * s {
                return Err(Error::Divergent(format!("datum growth {exponent} is not below 2s = {}", 2.0 * s)));
            }
        }
        Ok(())
    }

    /// Coefficients in `t` of `u(x + tω)` for a polynomial datum.
    fn line_coeffs(&self, x: &[f64], omega: &[f64]) -> Vec<f64> {
        let p = self.poly.as_ref().expect("polynomial datum");
        let mut out = vec![0.0; p.degree() as usize + 1];
        for (e, c) in p.terms() {
            let mut acc = vec![*c];
            for i in 0..self.n {
                let k = e[i] as usize;
                // (x_i + t ω_i)^k
                let mut f = vec![0.0; k + 1];
                let mut b = 1.0;
                for j in 0..=k {
                    f[j] = b * x[i].powi((k - j) as i32) * omega[i].powi(j as i32);
                    b = b * (k - j) as f64 / (j + 1) as f64;
                }
                let mut nxt = vec![0.0; acc.len() + k];
                for (p1, u) in acc.iter().enumerate() {
                    for (p2, v) in f.iter().enumerate() {
                        nxt[p1 + p2] += u * v;
                    }
                }
                acc = nxt;
            }
            for (j, v) in acc.iter().enumerate() {
                out[j] += v;
            }
        }
        out
    }

    /// Directions on `S^{n-1}` paired with their antipodes: `(ω, weight)` with
    /// weights summing to `|S^{n-1}|`, only one of each antipodal pair listed.
    fn half_directions(&self, m: usize) -> Vec<(Vec<f64>, f64)> {
        match self.n {
            1 => vec![(vec![1.0], 2.0)],
            _ => (0..m).map(|k| {
                let th = PI * k as f64 / m as f64;
                (vec![th.cos(), th.sin()], 2.0 * PI / m as f64)
            }).collect(),
        }
    }

    /// `|S^{n-1}|`-weighted spherical mean of `u(x + tω) - u(x)`.
    fn radial_increment(&self, x: &[f64], t: f64, dirs: &[(Vec<f64>, f64)]) -> f64 {
        let u0 = self.eval(x);
        let mut p = x.to_vec();
        let mut acc = 0.0;
        for (om, w) in dirs {
            for sg in [1.0, -1.0] {
                for i in 0..self.n {
                    p[i] = x[i] + sg * t * om[i];
                }
                acc += 0.5 * w * (self.eval(&p) - u0);
            }
        }
        acc
    }

    /// `t`-values past which the datum changes character.
    fn radial_breaks(&self, x: &[f64]) -> Vec<f64> {
        let r0 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut b: Vec<f64> = Vec::new();
        if let Decay::Compact { radius } = self.decay {
            b.push((radius - r0).abs());
            b.push(radius + r0);
        }
        if self.n == 1 {
            b.extend(self.breakpoints.iter().map(|c| (c - x[0]).abs()));
        }
        b.retain(|v| *v > 1e-12);
        b.sort_by(|a, c| a.partial_cmp(c).unwrap());
        b.dedup_by(|a, c| (*a - *c).abs() < 1e-12);
        b
    }
}

/// Controls for the extension and D-to-N computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionOptions {
    pub tol: f64,
    /// Angular nodes over a half circle for `n = 2`.
    pub directions: usize,
    /// Largest height used in the D-to-N extrapolation.
    pub dtn_y0: f64,
    /// Number of heights `y0 / 2^k` in the D-to-N extrapolation.
    pub dtn_levels: usize,
}

impl Default for ExtensionOptions {
    fn default() -> Self {
        ExtensionOptions { tol: 1e-14, directions: 48, dtn_y0: 0.05, dtn_levels: 6 }
    }
}

/// `γ |S^{n-1}| ∫_{φ_lo}^{φ_hi} A(y tanφ) sin^{n-1}φ cos^{2s-1}φ dφ` where
/// `A` is the spherical increment; exact at `φ_hi = π/2`.
fn increment_piece(
    u: &Datum,
    x: &[f64],
    y: f64,
    s: f64,
    phi_lo: f64,
    phi_hi: f64,
    dirs: &[(Vec<f64>, f64)],
    tol: f64,
) -> Estimate {
    let n = u.n as i32;
    let to_end = (FRAC_PI_2 - phi_hi).abs() < 1e-15;
    tanh_sinh::integrate_gaps(
        |phi, _lo, hi| {
            // near π/2 use the gap to the end for cos and tan
            let (sin, cos) = if to_end && hi < 0.5 { (hi.cos(), hi.sin()) } else { (phi.sin(), phi.cos()) };
            let t = y * sin / cos;
            u.radial_increment(x, t, dirs) * sin.powi(n - 1) * cos.powf(2.0 * s - 1.0)
        },
        phi_lo,
        phi_hi,
        tol,
    )
}

/// `v(x, y) - u(x)` for the extension of `u`, with an error estimate.
fn extension_increment(u: &Datum, x: &[f64], y: f64, s: f64, opts: &ExtensionOptions) -> Result<Estimate> {
    if !(y > 0.0) {
        return Err(Error::Domain(vec![y], "extension needs y > 0".into()));
    }
    if x.len() != u.n || !(1..=2).contains(&u.n) {
        return Err(Error::InvalidArgument("extension supports n = 1 or 2 with matching points".into()));
    }
    check_s(s)?;
    u.check(s)?;
    let g = gamma_closed(u.n, s);
    let eval = |dirs: &[(Vec<f64>, f64)]| -> Estimate {
        let mut cuts: Vec<f64> = vec![0.0];
        let mut tail_r = None;
        let breaks = u.radial_breaks(x);
        let last_t = match u.decay {
            Decay::Polynomial { .. } => {
                let r = 4.0 * y + 1.0;
                tail_r = Some(r);
                Some(r)
            }
            _ => None,
        };
        for b in breaks {
            if last_t.is_none_or(|r| b < r) {
                cuts.push((b / y).atan());
            }
        }
        cuts.push(last_t.map_or(FRAC_PI_2, |r| (r / y).atan()));
        let mut total = Estimate { value: 0.0, error: 0.0 };
        for w in cuts.windows(2) {
            if w[1] > w[0] {
                let e = increment_piece(u, x, y, s, w[0], w[1], dirs, opts.tol);
                total.value += e.value;
                total.error += e.error;
            }
        }
        if let Some(r) = tail_r {
            let t = poly_tail(u, x, y, s, r, dirs);
            total.value += t.value;
            total.error += t.error;
        }
        total
    };
    let m = opts.directions.max(4);
    let e = eval(&u.half_directions(m));
    let mut out = Estimate { value: g * e.value, error: g * e.error };
    if u.n == 2 {
        let coarse = eval(&u.half_directions(m / 2));
        out.error += g * (coarse.value - e.value).abs();
    }
    Ok(out)
}

/// `Σ_ω w_ω ∫_R^∞ (u(x+tω) - u(x)) y^{2s} t^{n-1} (t²+y²)^{-n/2-s} dt` for a
/// polynomial datum, with each `∫_R^∞ t^β dt` continued analytically to
/// `-R^{β+1}/(β+1)`.
fn poly_tail(u: &Datum, x: &[f64], y: f64, s: f64, r: f64, dirs: &[(Vec<f64>, f64)]) -> Estimate {
    let n = u.n as f64;
    let mut coeffs: Vec<f64> = Vec::new();
    for (om, w) in dirs {
        for sg in [1.0, -1.0] {
            let o: Vec<f64> = om.iter().map(|v| sg * v).collect();
            let c = u.line_coeffs(x, &o);
            if coeffs.len() < c.len() {
                coeffs.resize(c.len(), 0.0);
            }
            for (m, v) in c.iter().enumerate().skip(1) {
                coeffs[m] += 0.5 * w * v;
            }
        }
    }
    // (1 + (y/t)²)^{-n/2-s} = Σ_l b_l (y/t)^{2l}
    let (mut total, mut err) = (0.0, 0.0);
    for (m, c) in coeffs.iter().enumerate().skip(1) {
        if *c == 0.0 {
            continue;
        }
        let mut b = 1.0;
        let mut sum = 0.0;
        for l in 0..200 {
            let beta = m as f64 - 1.0 - 2.0 * s - 2.0 * l as f64;
            let term = b * y.powi(2 * l) * r.powf(beta + 1.0) / (beta + 1.0);
            sum -= term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
            b *= (-n / 2.0 - s - l as f64) / (l as f64 + 1.0);
        }
        let v = c * y.powf(2.0 * s) * sum;
        total += v;
        err += 8.0 * f64::EPSILON * v.abs();
    }
    Estimate { value: total, error: err }
}

/// `v(x, y) = γ(n,s) ∫ y^{2s} u(η) (|x-η|² + y²)^{-(n/2+s)} dη`.
///
/// Evaluated as `u(x)` plus the kernel integral of `u(η) - u(x)` in the
/// variable `|η - x| = y tanφ`, which clusters nodes at `η = x` and maps the
/// tail to a finite interval.
pub fn poisson_extend(u: &Datum, x: &[f64], y: f64, s: f64, opts: &ExtensionOptions) -> Result<Estimate> {
    let inc = extension_increment(u, x, y, s, opts)?;
    let u0 = u.eval(x);
    Ok(Estimate { value: u0 + inc.value, error: inc.error + 4.0 * f64::EPSILON * u0.abs() })
}

/// Outcome of the D-to-N extrapolation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DtnReport {
    /// `(-Δ)^s u(x) = -(C/γ) c`.
    pub value: f64,
    /// `c = lim (v(x,y) - u(x)) / y^{2s}`.
    pub coefficient: f64,
    /// `lim y^{1-2s} ∂_y v = 2s c`.
    pub conormal_limit: f64,
    /// `-(C/γ)·lim y^{1-2s} ∂_y v`, which is `2s` times `value`.
    pub limit_form_value: f64,
    /// Change in `c` when the smallest height is dropped.
    pub error: f64,
}

/// Exponents of `(v - u)/y^{2s}` removed by the extrapolation.
fn dtn_exponents(s: f64, count: usize) -> Vec<f64> {
    let mut e = Vec::new();
    let mut k = 1;
    while e.len() < count {
        e.push(2.0 * k as f64 - 2.0 * s);
        if e.len() < count {
            e.push(2.0 * k as f64);
        }
        k += 1;
    }
    e
}

fn fit_constant(ys: &[f64], gs: &[f64], exps: &[f64]) -> Option<f64> {
    let m = ys.len();
    let mat = nalgebra::DMatrix::from_fn(m, m, |i, j| if j == 0 { 1.0 } else { ys[i].powf(exps[j - 1]) });
    let rhs = nalgebra::DVector::from_column_slice(gs);
    mat.lu().solve(&rhs).map(|c| c[0])
}

/// Dirichlet-to-Neumann value of `u` at `x`: `v(x,y) = u(x) + c y^{2s} + ...`
/// sampled at heights `y0 2^{-k}` and extrapolated in the exponents
/// `2 - 2s, 2, 4 - 2s, 4, ...` of `(v - u)/y^{2s}`.
pub fn dtn(u: &Datum, x: &[f64], s: f64, opts: &ExtensionOptions) -> Result<DtnReport> {
    let p = FracParam::new(u.n, s)?;
    let levels = opts.dtn_levels.max(3);
    let ys: Vec<f64> = (0..levels).map(|k| opts.dtn_y0 * 0.5f64.powi(k as i32)).collect();
    let mut gs = Vec::with_capacity(levels);
    for &y in &ys {
        gs.push(extension_increment(u, x, y, s, opts)?.value / y.powf(2.0 * s));
    }
    let exps = dtn_exponents(s, levels - 1);
    let c = fit_constant(&ys, &gs, &exps).ok_or(Error::Singular)?;
    let c2 = fit_constant(&ys[..levels - 1], &gs[..levels - 1], &exps[..levels - 2]).ok_or(Error::Singular)?;
    let f = p.dtn_factor();
    Ok(DtnReport {
        value: -f * c,
        coefficient: c,
        conormal_limit: 2.0 * s * c,
        limit_form_value: -f * 2.0 * s * c,
        error: f * (c - c2).abs(),
    })
}

/// `C(1,s) P.V.∫ (u(x) - u(η)) |x - η|^{-1-2s} dη` for a datum on `R`.
///
/// The integrand is paired as `2u(x) - u(x+t) - u(x-t)`. Near `t = 0` the
/// pair is replaced by its Taylor expansion with `u''`, `u''''` taken from
/// two second differences; past the last breakpoint the tail is exact
/// (compact data), mapped to a finite interval (growth data), or continued
/// analytically (polynomials).
pub fn frac_laplacian_direct(u: &Datum, x: f64, s: f64, tol: f64) -> Result<Estimate> {
    if u.n != 1 {
        return Err(Error::InvalidArgument("the direct integral is implemented for n = 1".into()));
    }
    check_s(s)?;
    u.check(s)?;
    let c = cns_const(1, s)?;
    let ux = u.eval(&[x]);
    let pair = |t: f64| 2.0 * ux - u.eval(&[x + t]) - u.eval(&[x - t]);
    let breaks = u.radial_breaks(&[x]);
    let near = breaks.first().copied().unwrap_or(f64::INFINITY);
    let delta = (0.05f64).min(0.25 * near);
    // 2u(x) - u(x+h) - u(x-h) = Σ_j c_j h^{2j}, fitted from four step sizes
    let two_s = 2.0 * s;
    const TERMS: usize = 4;
    let hs: Vec<f64> = (0..TERMS).map(|k| delta * 0.5f64.powi(k as i32)).collect();
    let mat = nalgebra::DMatrix::from_fn(TERMS, TERMS, |i, j| (hs[i] / delta).powi(2 * j as i32 + 2));
    let rhs = nalgebra::DVector::from_iterator(TERMS, hs.iter().map(|&h| pair(h)));
    let cs = mat.lu().solve(&rhs).ok_or(Error::Singular)?;
    let near: Vec<f64> = (0..TERMS).map(|j| cs[j] / (2.0 * j as f64 + 2.0 - two_s)).collect();
    let mut total: f64 = near.iter().sum::<f64>() * delta.powf(-two_s);
    let mut err = near[TERMS - 1].abs() * delta.powf(-two_s);
    let far = match u.decay {
        Decay::Compact { .. } => *breaks.last().unwrap_or(&delta),
        Decay::Polynomial { .. } => (x.abs() + 1.0).max(2.0 * delta),
        Decay::Growth { .. } => breaks.last().copied().unwrap_or(1.0).max(x.abs() + 1.0),
    };
    let mut cuts = vec![delta];
    cuts.extend(breaks.iter().copied().filter(|b| *b > delta && *b < far));
    cuts.push(far.max(delta));
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            let e = tanh_sinh::integrate(|t| pair(t) / t.powf(1.0 + two_s), w[0], w[1], tol);
            total += e.value;
            err += e.error;
        }
    }
    match u.decay {
        Decay::Compact { .. } => total += 2.0 * ux * far.powf(-two_s) / two_s,
        Decay::Growth { .. } => {
            // t = far / τ
            let e = tanh_sinh::integrate_gaps(
                |_, tau, _| pair(far / tau) * far.powf(-two_s) * tau.powf(two_s - 1.0),
                0.0,
                1.0,
                tol,
            );
            total += e.value;
            err += e.error;
        }
        Decay::Polynomial { .. } => {
            let cf = u.line_coeffs(&[x], &[1.0]);
            for (m, v) in cf.iter().enumerate().skip(1) {
                if m % 2 == 1 {
                    continue;
                }
                let beta = m as f64 - two_s;
                // pair(t) = -2 Σ_even c_m t^m; ∫_far^∞ t^{m-1-2s} ↦ -far^β/β
                total += 2.0 * v * far.powf(beta) / beta;
            }
        }
    }
    Ok(Estimate { value: c * total, error: c * err + 16.0 * f64::EPSILON * (c * total).abs() })
}

/// The smooth bump `exp(-1/(1 - |x|²))` supported in the unit ball.
pub fn bump(n: usize) -> Datum {
    Datum::compact(n, 1.0, |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 < 1.0 {
            (-1.0 / (1.0 - r2)).exp()
        } else {
            0.0
        }
    })
}
