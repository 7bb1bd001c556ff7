//! Integrals against the weight `|y|^a` on balls and spheres centred on `Σ = {y = 0}`.

pub mod rules;
pub mod tanh_sinh;

pub use rules::{BallRule, RuleKind, SphereRule};

use crate::error::{Error, Result};
use serde::Serialize;
use statrs::function::gamma::{gamma, ln_gamma};
use std::f64::consts::PI;

/// Exponent of the weight `|y|^a` together with the dimension `n` of `Σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightParam {
    pub a: f64,
    pub n: usize,
}

impl WeightParam {
    /// Accepts any integrable exponent `a > -1`; see [`WeightParam::in_main_range`].
    pub fn new(n: usize, a: f64) -> Result<Self> {
        if !(a > -1.0) || !a.is_finite() {
            return Err(Error::NonIntegrableWeight(a));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("dimension n must be >= 1".into()));
        }
        Ok(WeightParam { a, n })
    }

    /// `a ∈ (-1, 1)`, the range where the operator is degenerate or singular
    /// but the full theory applies.
    pub fn in_main_range(&self) -> bool {
        self.a < 1.0
    }

    /// Dimension of the ambient space `R^{n+1}`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Homogeneity of the weighted sphere measure, `n + a`.
    pub fn sphere_exponent(&self) -> f64 {
        self.n as f64 + self.a
    }

    /// The weight of the conjugate operator `L_{2-a}`.
    pub fn conjugate(&self) -> Self {
        WeightParam { a: 2.0 - self.a, n: self.n }
    }
}

/// A numerical value together with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// `|S^{m}|`, the unweighted area of the unit sphere in `R^{m+1}`.
pub fn plain_sphere_area(m: usize) -> f64 {
    let h = (m as f64 + 1.0) / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// `|S^n|_a = ∫_{∂B_1} |y|^a dσ` in closed form, `B((a+1)/2, n/2) |S^{n-1}|`.
pub fn sphere_measure_const(n: usize, a: f64) -> Result<f64> {
    let w = WeightParam::new(n, a)?;
    let (p, q) = ((w.a + 1.0) / 2.0, n as f64 / 2.0);
    let beta = (ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q)).exp();
    Ok(beta * plain_sphere_area(n - 1))
}

/// `|B_r|_a = r^{n+a+1} |S^n|_a / (n+a+1)`.
pub fn ball_measure_const(n: usize, a: f64, r: f64) -> Result<f64> {
    let s = sphere_measure_const(n, a)?;
    let e = n as f64 + a + 1.0;
    Ok(r.powf(e) * s / e)
}

fn check_center(x0: &[f64], w: &WeightParam, r: f64) -> Result<()> {
    if x0.len() != w.dim() {
        return Err(Error::InvalidArgument(format!(
            "center has {} coordinates, expected {}",
            x0.len(),
            w.dim()
        )));
    }
    if x0[w.n] != 0.0 {
        return Err(Error::Domain(x0.to_vec(), "center must lie on Σ (y = 0)".into()));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

fn checked_sum<F>(rule_sum: impl FnOnce(&mut dyn FnMut(&[f64]) -> f64) -> f64, f: &F, shift: &dyn Fn(&[f64], &mut [f64])) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let mut bad: Option<Vec<f64>> = None;
    let mut buf = Vec::new();
    let total = rule_sum(&mut |q: &[f64]| {
        buf.resize(q.len(), 0.0);
        shift(q, &mut buf);
        let v = f(&buf);
        if !v.is_finite() && bad.is_none() {
            bad = Some(buf.clone());
        }
        v
    });
    match bad {
        Some(p) => Err(Error::NonFinite(p)),
        None => Ok(total),
    }
}

/// Sphere integral with an explicit rule: `∫_{∂B_r(x0)} |y|^a f dσ`.
pub fn integrate_sphere_with<F>(rule: &SphereRule, f: &F, x0: &[f64], r: f64, w: &WeightParam) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    check_center(x0, w, r)?;
    let shift = |q: &[f64], out: &mut [f64]| {
        for i in 0..q.len() {
            out[i] = x0[i] + r * q[i];
        }
    };
    let s = checked_sum(|g| rule.sum(g), f, &shift)?;
    Ok(s * r.powf(w.sphere_exponent()))
}

/// Ball integral with an explicit rule: `∫_{B_r(x0)} |y|^a f dX`.
pub fn integrate_ball_with<F>(rule: &BallRule, f: &F, x0: &[f64], r: f64, w: &WeightParam) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    check_center(x0, w, r)?;
    let shift = |q: &[f64], out: &mut [f64]| {
        for i in 0..q.len() {
            out[i] = x0[i] + r * q[i];
        }
    };
    let s = checked_sum(|g| rule.sum(g), f, &shift)?;
    Ok(s * r.powf(w.sphere_exponent() + 1.0))
}

/// Default exactness degree of the Gauss-Jacobi rules.
pub const DEFAULT_DEGREE: usize = 30;

/// `∫_{∂B_r(x0)} |y|^a f dσ` with the default rule; the error estimate is the
/// difference against a rule of twice the degree.
pub fn integrate_sphere<F>(f: &F, x0: &[f64], r: f64, w: &WeightParam) -> Result<Estimate>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let coarse = SphereRule::gauss_jacobi(w, DEFAULT_DEGREE)?;
    let fine = SphereRule::gauss_jacobi(w, 2 * DEFAULT_DEGREE)?;
    let v0 = integrate_sphere_with(&coarse, f, x0, r, w)?;
    let v1 = integrate_sphere_with(&fine, f, x0, r, w)?;
    Ok(Estimate { value: v1, error: (v1 - v0).abs() })
}

/// `∫_{B_r(x0)} |y|^a f dX` with the default rule and a degree-refinement error estimate.
pub fn integrate_ball<F>(f: &F, x0: &[f64], r: f64, w: &WeightParam) -> Result<Estimate>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let coarse = BallRule::new(w, RuleKind::GaussJacobi { degree: DEFAULT_DEGREE })?;
    let fine = BallRule::new(w, RuleKind::GaussJacobi { degree: 2 * DEFAULT_DEGREE })?;
    let v0 = integrate_ball_with(&coarse, f, x0, r, w)?;
    let v1 = integrate_ball_with(&fine, f, x0, r, w)?;
    Ok(Estimate { value: v1, error: (v1 - v0).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    // 4 ∫_0^{π/2} sin^{1/2} θ dθ, computed with an independent adaptive
    // tanh-sinh routine (mpmath quad, 30 digits) before the build.
    const S1_HALF: f64 = 4.792_560_938_942_369;

    #[test]
    fn sphere_measure_known_values() {
        assert!((sphere_measure_const(1, 0.0).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_measure_const(2, 0.0).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_measure_const(1, 0.5).unwrap() - S1_HALF).abs() < 1e-12);
    }

    #[test]
    fn non_integrable_weight_is_rejected() {
        assert_eq!(sphere_measure_const(1, -1.0), Err(Error::NonIntegrableWeight(-1.0)));
        assert!(WeightParam::new(1, -1.5).is_err());
        // accepted but outside the main range
        let w = WeightParam::new(1, 1.5).unwrap();
        assert!(!w.in_main_range());
    }

    #[test]
    fn sphere_integral_examples() {
        let w = WeightParam::new(1, 0.0).unwrap();
        let one = |_: &[f64]| 1.0;
        let e = integrate_sphere(&one, &[0.0, 0.0], 2.0, &w).unwrap();
        assert!((e.value - 4.0 * PI).abs() < 1e-12);
        let y2 = |p: &[f64]| p[1] * p[1];
        let e = integrate_sphere(&y2, &[0.0, 0.0], 1.0, &w).unwrap();
        assert!((e.value - PI).abs() < 1e-13);
        assert!(e.error < 1e-12);
    }

    #[test]
    fn ball_integral_examples() {
        for (n, a) in [(1, 0.0), (1, -0.5), (2, 0.25)] {
            let w = WeightParam::new(n, a).unwrap();
            let x0 = vec![0.0; n + 1];
            let one = |_: &[f64]| 1.0;
            let s = sphere_measure_const(n, a).unwrap();
            let e = integrate_ball(&one, &x0, 1.0, &w).unwrap();
            let exact = s / (n as f64 + a + 1.0);
            assert!((e.value - exact).abs() < 1e-12 * exact);
            let e = integrate_ball(&one, &x0, 0.5, &w).unwrap();
            assert!((e.value - exact * 0.5f64.powf(n as f64 + a + 1.0)).abs() < 1e-12 * exact);
        }
        let w = WeightParam::new(1, 0.0).unwrap();
        let r2 = |p: &[f64]| p[0] * p[0] + p[1] * p[1];
        let e = integrate_ball(&r2, &[0.0, 0.0], 1.0, &w).unwrap();
        assert!((e.value - PI / 2.0).abs() < 1e-13, "{e:?}");
    }

    #[test]
    fn center_off_sigma_is_rejected() {
        let w = WeightParam::new(1, 0.0).unwrap();
        let one = |_: &[f64]| 1.0;
        assert!(integrate_sphere(&one, &[0.0, 0.1], 1.0, &w).is_err());
    }

    #[test]
    fn non_finite_sample_propagates() {
        let w = WeightParam::new(1, 0.0).unwrap();
        let bad = |p: &[f64]| if p[0] > 0.5 { f64::NAN } else { 1.0 };
        assert!(matches!(integrate_sphere(&bad, &[0.0, 0.0], 1.0, &w), Err(Error::NonFinite(_))));
    }
}
