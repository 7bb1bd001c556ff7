//! Product rules on the weighted sphere `S^n` and ball `B_1` of `R^{n+1}`.
//!
//! Points are written `(x_1, .., x_n, y)`. The sphere is parametrized by the
//! `y` coordinate `t` and a point `ω` of the unweighted `S^{n-1}`:
//!
//! ```text
//! ∫_{S^n} |y|^a f dσ = ∫_{-1}^{1} |t|^a (1-t²)^{(n-2)/2} ∫_{S^{n-1}} f(√(1-t²) ω, t) dω dt
//! ```
//!
//! The Gauss-Jacobi kind integrates in `u = t²`, where the weight becomes
//! `u^{(a-1)/2} (1-u)^{(n-2)/2}`; it is exact for polynomial integrands up
//! to the requested degree. The tanh-sinh kind integrates in the latitude
//! `ψ = asin(t)` and converges exponentially for integrands carrying extra
//! `|y|^γ` factors, such as the antisymmetric solutions `y|y|^{-a}`.

use super::tanh_sinh;
use super::WeightParam;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use statrs::function::gamma::gamma;
use std::f64::consts::{FRAC_PI_2, PI};

/// `P_n^{(α,β)}(x)` and `P_{n-1}^{(α,β)}(x)` by the three-term recurrence.
fn jacobi_pair(n: usize, alpha: f64, beta: f64, x: f64) -> (f64, f64) {
    let ab = alpha + beta;
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (alpha - beta + (ab + 2.0) * x);
    if n == 0 {
        return (p0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Nodes and weights of a Gauss-Jacobi rule on `[0, 1]` for the weight
/// `u^beta (1-u)^alpha`.
///
/// Golub-Welsch eigenvalues seed a Newton polish on the recurrence; weights
/// come from the closed form in terms of `P_n'`.
pub fn gauss_jacobi_unit(count: usize, alpha: f64, beta: f64) -> Result<Vec<(f64, f64)>> {
    if count == 0 {
        return Err(Error::InvalidArgument("rule needs at least one node".into()));
    }
    for e in [alpha, beta] {
        if !(e > -1.0) || !e.is_finite() {
            return Err(Error::NonIntegrableWeight(e));
        }
    }
    let n = count;
    let ab = alpha + beta;
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        jm[(k, k)] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (c * (c + 2.0))
        };
        if k + 1 < n {
            let m = kf + 1.0;
            let c = 2.0 * m + ab;
            let b2 = if k == 0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / (c * c * (c + 1.0))
            } else {
                4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (c * c * (c + 1.0) * (c - 1.0))
            };
            let b = b2.sqrt();
            jm[(k, k + 1)] = b;
            jm[(k + 1, k)] = b;
        }
    }
    let mut xs: Vec<f64> = jm.symmetric_eigenvalues().iter().copied().collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let nf = n as f64;
    let deriv = |x: f64| {
        let (p, q) = jacobi_pair(n, alpha, beta, x);
        let c = 2.0 * nf + ab;
        let d = (nf * (alpha - beta - c * x) * p + 2.0 * (nf + alpha) * (nf + beta) * q) / (c * (1.0 - x * x));
        (p, d)
    };
    // Γ(n+α+1)Γ(n+β+1) / (Γ(n+α+β+1) n!) by a product from n = 1; log-gamma
    // differences at large arguments lose about 1e-13 relative accuracy
    let mut ratio = gamma(alpha + 2.0) * gamma(beta + 2.0) / gamma(ab + 2.0);
    for k in 2..=n {
        let k = k as f64;
        ratio *= (k + alpha) * (k + beta) / ((k + ab) * k);
    }
    let log_const = ratio.ln() + (ab + 1.0) * std::f64::consts::LN_2;
    let scale = 2f64.powf(-ab - 1.0);
    let mut out = Vec::with_capacity(n);
    for x0 in xs {
        let mut x = x0;
        for _ in 0..3 {
            let (p, d) = deriv(x);
            let step = p / d;
            if !step.is_finite() {
                break;
            }
            x -= step;
        }
        let (_, d) = deriv(x);
        let w = (log_const - ((1.0 - x * x) * d * d).ln()).exp();
        out.push((0.5 * (1.0 + x), w * scale));
    }
    Ok(out)
}

/// Which one-dimensional rule drives the latitude and radial directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Exact for polynomials of total degree `<= degree`.
    GaussJacobi { degree: usize },
    /// Double-exponential rule with step `2^-level`.
    TanhSinh { level: u32 },
}

impl Default for RuleKind {
    fn default() -> Self {
        RuleKind::GaussJacobi { degree: 30 }
    }
}

/// Quadrature on the unit sphere `S^n` against `|y|^a dσ`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: RuleKind,
}

/// Unweighted rule on `S^m`, given as flattened `(m+1)`-vectors.
fn plain_sphere(m: usize, degree: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    match m {
        0 => Ok((vec![1.0, -1.0], vec![1.0, 1.0])),
        1 => {
            let count = 2 * (degree / 2 + 1);
            let mut nodes = Vec::with_capacity(2 * count);
            for k in 0..count {
                let th = 2.0 * PI * k as f64 / count as f64;
                nodes.push(th.cos());
                nodes.push(th.sin());
            }
            Ok((nodes, vec![2.0 * PI / count as f64; count]))
        }
        _ => {
            let r = SphereRule::gauss_jacobi(&WeightParam::new(m, 0.0)?, degree)?;
            Ok((r.nodes, r.weights))
        }
    }
}

impl SphereRule {
    /// Product Gauss-Jacobi rule exact for polynomials of total degree `<= degree`.
    pub fn gauss_jacobi(w: &WeightParam, degree: usize) -> Result<Self> {
        let n = w.n;
        let (inner, inner_w) = plain_sphere(n - 1, degree)?;
        // even polynomial of degree <= degree in t has degree <= degree/2 in u
        let count = (degree / 2) / 2 + 1;
        let lat = gauss_jacobi_unit(count, (n as f64 - 2.0) / 2.0, (w.a - 1.0) / 2.0)?;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for &(u, wu) in &lat {
            let t = u.sqrt();
            let c = (1.0 - u).max(0.0).sqrt();
            for sign in [1.0, -1.0] {
                for (k, &wi) in inner_w.iter().enumerate() {
                    for i in 0..n {
                        nodes.push(c * inner[k * n + i]);
                    }
                    nodes.push(sign * t);
                    weights.push(0.5 * wu * wi);
                }
            }
        }
        Ok(SphereRule { dim: n + 1, nodes, weights, kind: RuleKind::GaussJacobi { degree } })
    }

    /// Tanh-sinh rule in the latitude; the azimuthal rule (n >= 2) is exact
    /// for polynomials of degree `<= azimuth_degree`.
    pub fn tanh_sinh(w: &WeightParam, level: u32, azimuth_degree: usize) -> Result<Self> {
        let n = w.n;
        let (inner, inner_w) = plain_sphere(n - 1, azimuth_degree)?;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        // nodes this close to a pole or the equator carry no weight in double
        // precision but can underflow y to exactly 0 once scaled
        for node in tanh_sinh::rule(level).into_iter().filter(|nd| nd.gap_lo.min(nd.gap_hi) > 1e-100) {
            // ψ in (0, π/2): sin ψ from the gap to 0, cos ψ from the gap to π/2
            let sin_psi = (FRAC_PI_2 * node.gap_lo).sin();
            let cos_psi = (FRAC_PI_2 * node.gap_hi).sin();
            let base = FRAC_PI_2 * node.w * sin_psi.powf(w.a) * cos_psi.powi(n as i32 - 1);
            for sign in [1.0, -1.0] {
                for (k, &wi) in inner_w.iter().enumerate() {
                    for i in 0..n {
                        nodes.push(cos_psi * inner[k * n + i]);
                    }
                    nodes.push(sign * sin_psi);
                    weights.push(base * wi);
                }
            }
        }
        Ok(SphereRule { dim: n + 1, nodes, weights, kind: RuleKind::TanhSinh { level } })
    }

    pub fn new(w: &WeightParam, kind: RuleKind) -> Result<Self> {
        match kind {
            RuleKind::GaussJacobi { degree } => Self::gauss_jacobi(w, degree),
            RuleKind::TanhSinh { level } => Self::tanh_sinh(w, level, 48),
        }
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.nodes.chunks_exact(self.dim).zip(self.weights.iter().copied())
    }

    /// `Σ w_i f(ω_i)` over the unit sphere.
    pub fn sum<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(p, w)| w * f(p)).sum()
    }
}

/// Quadrature on the unit ball against `|y|^a dX`: a radial rule for
/// `t^{n+a} dt` on `(0, 1)` composed with a [`SphereRule`].
#[derive(Debug, Clone)]
pub struct BallRule {
    pub radial: Vec<(f64, f64)>,
    pub sphere: SphereRule,
}

impl BallRule {
    pub fn new(w: &WeightParam, kind: RuleKind) -> Result<Self> {
        let sphere = SphereRule::new(w, kind)?;
        let expo = w.n as f64 + w.a;
        let radial = match kind {
            RuleKind::GaussJacobi { degree } => gauss_jacobi_unit(degree / 2 + 1, 0.0, expo)?,
            RuleKind::TanhSinh { level } => tanh_sinh::rule(level)
                .into_iter()
                .map(|nd| (nd.x, nd.w * nd.gap_lo.powf(expo)))
                .collect(),
        };
        Ok(BallRule { radial, sphere })
    }

    /// `Σ w f(X)` over the unit ball.
    pub fn sum<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let d = self.sphere.dim();
        let mut p = vec![0.0; d];
        let mut total = 0.0;
        for &(t, wt) in &self.radial {
            let mut shell = 0.0;
            for (q, ws) in self.sphere.iter() {
                for i in 0..d {
                    p[i] = t * q[i];
                }
                shell += ws * f(&p);
            }
            total += wt * shell;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::sphere_measure_const;

    #[test]
    fn gauss_jacobi_unit_moments() {
        // ∫_0^1 u^{-1/4} (1-u)^{1/2} du = B(3/4, 3/2)
        let r = gauss_jacobi_unit(8, 0.5, -0.25).unwrap();
        let s: f64 = r.iter().map(|p| p.1).sum();
        let exact = statrs::function::beta::beta(0.75, 1.5);
        assert!((s - exact).abs() < 1e-13 * exact);
    }

    #[test]
    fn gauss_jacobi_high_count_is_exact() {
        for count in [16, 31, 60] {
            let r = gauss_jacobi_unit(count, 0.0, 1.0).unwrap();
            let m2: f64 = r.iter().map(|p| p.1 * p.0 * p.0).sum();
            assert!((m2 - 0.25).abs() < 1e-14, "{count}: {m2}");
            // ∫ u^{k-1/2} (1-u)^{1/2} = B(k+1/2, 3/2), with B(1/2, 3/2) = π/2
            let r = gauss_jacobi_unit(count, 0.5, -0.5).unwrap();
            let mut exact = std::f64::consts::FRAC_PI_2;
            for k in 0..6 {
                let m: f64 = r.iter().map(|p| p.1 * p.0.powi(k)).sum();
                assert!((m - exact).abs() < 1e-14 * exact, "{count} k={k}: {m} {exact}");
                exact *= (k as f64 + 0.5) / (k as f64 + 2.0);
            }
        }
    }

    #[test]
    fn weights_positive_and_sum_to_measure() {
        for n in 1..=3 {
            for a in [-0.5, 0.0, 0.3, 0.9] {
                let w = WeightParam::new(n, a).unwrap();
                let exact = sphere_measure_const(n, a).unwrap();
                for kind in [RuleKind::GaussJacobi { degree: 12 }, RuleKind::TanhSinh { level: 3 }] {
                    if n == 3 && matches!(kind, RuleKind::TanhSinh { .. }) {
                        continue;
                    }
                    let r = SphereRule::new(&w, kind).unwrap();
                    assert!(r.weights().iter().all(|&x| x >= 0.0));
                    let s: f64 = r.weights().iter().sum();
                    assert!((s - exact).abs() < 1e-12 * exact, "n={n} a={a} {kind:?}: {s} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn nodes_lie_on_sphere() {
        let w = WeightParam::new(2, -0.25).unwrap();
        let r = SphereRule::gauss_jacobi(&w, 10).unwrap();
        for (p, _) in r.iter() {
            let norm: f64 = p.iter().map(|v| v * v).sum();
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }
}
