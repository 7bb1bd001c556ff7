//! Almgren, Weiss and Monneau functionals at centres on `Σ`, and the checks
//! built on them (monotonicity, the log-derivative identity for `H`, doubling).
//!
//! With `X = X0 + rZ` every functional becomes an integral over the unit
//! sphere or ball:
//!
//! ```text
//! H(r) = r^{-(n+a)} ∫_{∂B_r} |y|^a u²            = ∫_{S^n} |z_y|^a u²
//! E(r) = r^{-(n+a-1)} ∫_{B_r} |y|^a |∇u|²        = r² ∫_{B_1} |z_y|^a |∇u|²
//! M(r) = r^{-(n+a+2k)} ∫_{∂B_r} |y|^a (u - p)²   = r^{-2k} ∫_{S^n} |z_y|^a (u - p)²
//! ```

use crate::error::{Error, Result};
use crate::field::Field;
use crate::quadrature::{tanh_sinh, SphereRule, WeightParam};
use rayon::prelude::*;
use serde::Serialize;

/// Quadrature levels used by the functionals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalConfig {
    /// Tanh-sinh level of the latitude rule on the sphere.
    pub sphere_level: u32,
    /// Tanh-sinh level of the radial rule in the ball.
    pub radial_level: u32,
    /// Exactness degree of the azimuthal rule (n >= 2).
    pub azimuth_degree: usize,
    /// Step in `log r` for the centered derivative of `log H`.
    pub log_step: f64,
}

impl Default for FunctionalConfig {
    fn default() -> Self {
        FunctionalConfig { sphere_level: 4, radial_level: 4, azimuth_degree: 24, log_step: 1e-2 }
    }
}

/// Precomputed unit-sphere and radial rules for one weight.
#[derive(Debug, Clone)]
pub struct Functionals {
    pub w: WeightParam,
    pub cfg: FunctionalConfig,
    sphere: SphereRule,
    radial: Vec<(f64, f64)>,
}

/// All functionals at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusSample {
    pub r: f64,
    pub h: f64,
    pub e: f64,
    pub n: f64,
    /// `d/dr log H` by a Richardson-extrapolated centered difference.
    pub dlog_h: f64,
    /// `r^{-(n+a-1)} ∫_{∂B_r} |y|^a u ∂_r u`, equal to `E` for solutions.
    pub e_boundary: f64,
    /// `r^{-(n+a+1)} ∫_{B_r} |y|^a u²`.
    pub ball_l2: f64,
}

impl Functionals {
    pub fn new(w: &WeightParam, cfg: FunctionalConfig) -> Result<Self> {
        let sphere = SphereRule::tanh_sinh(w, cfg.sphere_level, cfg.azimuth_degree)?;
        let expo = w.sphere_exponent();
        let radial = tanh_sinh::rule(cfg.radial_level)
            .into_iter()
            .filter(|nd| nd.gap_lo > 1e-100)
            .map(|nd| (nd.x, nd.w * nd.gap_lo.powf(expo)))
            .filter(|&(_, wt)| wt > 0.0)
            .collect();
        Ok(Functionals { w: *w, cfg, sphere, radial })
    }

    pub fn with_defaults(w: &WeightParam) -> Result<Self> {
        Self::new(w, FunctionalConfig::default())
    }

    /// The unit-sphere rule carrying the weight `|z_y|^a`.
    pub fn sphere_rule(&self) -> &SphereRule {
        &self.sphere
    }

    fn check(&self, u: &dyn Field, x0: &[f64], r: f64) -> Result<()> {
        let d = self.w.dim();
        if u.dim() != d || x0.len() != d {
            return Err(Error::InvalidArgument(format!("field/center dimension must be {d}")));
        }
        if x0[d - 1] != 0.0 {
            return Err(Error::Domain(x0.to_vec(), "center must lie on Σ (y = 0)".into()));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
        }
        Ok(())
    }

    /// `(∫_{S^n} u², ∫_{S^n} u ∂_r u, max |u|)` at radius `r`.
    fn sphere_terms(&self, u: &dyn Field, x0: &[f64], r: f64, want_radial: bool) -> Result<(f64, f64, f64)> {
        let d = self.w.dim();
        let mut p = vec![0.0; d];
        let mut g = vec![0.0; d];
        let (mut h, mut dr, mut mx) = (0.0, 0.0, 0.0f64);
        for (q, wt) in self.sphere.iter() {
            for i in 0..d {
                p[i] = x0[i] + r * q[i];
            }
            let v = u.value(&p);
            if !v.is_finite() {
                return Err(Error::NonFinite(p));
            }
            h += wt * v * v;
            mx = mx.max(v.abs());
            if want_radial {
                u.gradient(&p, &mut g);
                let radial: f64 = g.iter().zip(q).map(|(a, b)| a * b).sum();
                dr += wt * v * radial;
            }
        }
        Ok((h, dr, mx))
    }

    /// `H(r)`; fails on a degenerate sphere where `u` vanishes to roundoff.
    pub fn h(&self, u: &dyn Field, x0: &[f64], r: f64) -> Result<f64> {
        self.check(u, x0, r)?;
        let (h, _, mx) = self.sphere_terms(u, x0, r, false)?;
        if mx == 0.0 || h <= 1e-30 * mx * mx {
            return Err(Error::DegenerateSphere { r, h });
        }
        Ok(h)
    }

    /// `r ∫_{S^n} |z_y|^a u ∂_r u / H(r)`, the frequency in boundary form.
    /// It equals `E/H` for solutions and needs sphere samples only.
    pub fn boundary_frequency(&self, u: &dyn Field, x0: &[f64], r: f64) -> Result<f64> {
        self.check(u, x0, r)?;
        let (h, dr, mx) = self.sphere_terms(u, x0, r, true)?;
        if mx == 0.0 || h <= 1e-30 * mx * mx {
            return Err(Error::DegenerateSphere { r, h });
        }
        Ok(r * dr / h)
    }

    /// `(∫_{B_1} |∇u(x0 + rZ)|², ∫_{B_1} u(x0 + rZ)²)` against `|z_y|^a`.
    fn ball_terms(&self, u: &dyn Field, x0: &[f64], r: f64) -> Result<(f64, f64)> {
        let d = self.w.dim();
        let parts: Vec<Result<(f64, f64)>> = self
            .radial
            .par_iter()
            .map(|&(t, wt)| {
                let mut p = vec![0.0; d];
                let mut g = vec![0.0; d];
                let (mut gs, mut vs) = (0.0, 0.0);
                for (q, ws) in self.sphere.iter() {
                    for i in 0..d {
                        p[i] = x0[i] + r * t * q[i];
                    }
                    let v = u.value(&p);
                    u.gradient(&p, &mut g);
                    let g2: f64 = g.iter().map(|x| x * x).sum();
                    if !v.is_finite() || !g2.is_finite() {
                        return Err(Error::NonFinite(p));
                    }
                    gs += ws * g2;
                    vs += ws * v * v;
                }
                Ok((wt * gs, wt * vs))
            })
            .collect();
        let mut acc = (0.0, 0.0);
        for p in parts {
            let (a, b) = p?;
            acc.0 += a;
            acc.1 += b;
        }
        Ok(acc)
    }

    /// `d/dr log H` from `H` at `r e^{±δ}` and `r e^{±δ/2}`, Richardson-combined.
    pub fn dlog_h(&self, u: &dyn Field, x0: &[f64], r: f64) -> Result<f64> {
        let dl = self.cfg.log_step;
        let central = |delta: f64| -> Result<f64> {
            let hp = self.h(u, x0, r * delta.exp())?;
            let hm = self.h(u, x0, r * (-delta).exp())?;
            Ok((hp.ln() - hm.ln()) / (2.0 * delta))
        };
        let d1 = central(dl)?;
        let d2 = central(0.5 * dl)?;
        Ok((4.0 * d2 - d1) / 3.0 / r)
    }

    /// Every functional at one radius.
    pub fn sample(&self, u: &dyn Field, x0: &[f64], r: f64) -> Result<RadiusSample> {
        self.check(u, x0, r)?;
        let (h, dr, mx) = self.sphere_terms(u, x0, r, true)?;
        if mx == 0.0 || h <= 1e-30 * mx * mx {
            return Err(Error::DegenerateSphere { r, h });
        }
        let (g2, l2) = self.ball_terms(u, x0, r)?;
        let e = r * r * g2;
        Ok(RadiusSample { r, h, e, n: e / h, dlog_h: self.dlog_h(u, x0, r)?, e_boundary: r * dr, ball_l2: l2 })
    }

    /// `M(r) = r^{-2k} ∫_{S^n} (u - p)²(x0 + rω)`, with `p` centred at `x0`.
    pub fn monneau_value(&self, u: &dyn Field, p: &dyn Field, k: f64, x0: &[f64], r: f64) -> Result<f64> {
        self.check(u, x0, r)?;
        let d = self.w.dim();
        let mut x = vec![0.0; d];
        let mut z = vec![0.0; d];
        let mut m = 0.0;
        for (q, wt) in self.sphere.iter() {
            for i in 0..d {
                z[i] = r * q[i];
                x[i] = x0[i] + z[i];
            }
            let diff = u.value(&x) - p.value(&z);
            if !diff.is_finite() {
                return Err(Error::NonFinite(x));
            }
            m += wt * diff * diff;
        }
        Ok(m * r.powf(-2.0 * k))
    }
}

/// Where a profile's field came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ExactPoly,
    Grid,
    Extension,
}

/// Sampled `r ↦ (H, E, N)` at a centre, radii increasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyProfile {
    pub center: Vec<f64>,
    pub a: f64,
    pub n: usize,
    pub provenance: Provenance,
    pub samples: Vec<RadiusSample>,
}

impl FrequencyProfile {
    pub fn radii(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.r).collect()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.n).collect()
    }

    /// `N(X0, u, 0+)` from the three smallest radii by Aitken extrapolation,
    /// falling back to the smallest-radius value when the sequence is not
    /// geometric enough to extrapolate.
    pub fn limit_frequency(&self) -> f64 {
        let n = self.frequencies();
        if n.len() < 3 {
            return n[0];
        }
        extrapolate_limit(n[2], n[1], n[0])
    }
}

/// Aitken Δ² limit of a sequence `s0, s1, s2` converging geometrically.
pub fn extrapolate_limit(s0: f64, s1: f64, s2: f64) -> f64 {
    let d1 = s1 - s0;
    let d2 = s2 - s1;
    let den = d2 - d1;
    if den.abs() <= 1e-14 * (s2.abs() + 1.0) || d2.abs() <= 1e-13 * (s2.abs() + 1.0) {
        return s2;
    }
    let ratio = d2 / d1;
    // only extrapolate a monotone geometric tail
    if !(0.0..0.95).contains(&ratio) {
        return s2;
    }
    s2 - d2 * d2 / den
}

/// Geometric ladder `r_max · q^j` from `r_max` down to `r_min` with `count`
/// rungs, returned in increasing order.
pub fn geometric_radii(r_max: f64, r_min: f64, count: usize) -> Vec<f64> {
    assert!(count >= 1 && r_max > 0.0 && r_min > 0.0);
    if count == 1 {
        return vec![r_max];
    }
    let q = (r_min / r_max).powf(1.0 / (count - 1) as f64);
    let mut v: Vec<f64> = (0..count).map(|j| r_max * q.powi(j as i32)).collect();
    v.reverse();
    v
}

/// Almgren frequency profile of `u` at `x0` over `radii` (any order; sorted here).
pub fn almgren_with(fun: &Functionals, u: &dyn Field, x0: &[f64], radii: &[f64], provenance: Provenance) -> Result<FrequencyProfile> {
    let mut rs = radii.to_vec();
    rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let samples = rs.iter().map(|&r| fun.sample(u, x0, r)).collect::<Result<Vec<_>>>()?;
    Ok(FrequencyProfile { center: x0.to_vec(), a: fun.w.a, n: fun.w.n, provenance, samples })
}

/// [`almgren_with`] using the default rules.
pub fn almgren(u: &dyn Field, x0: &[f64], radii: &[f64], w: &WeightParam) -> Result<FrequencyProfile> {
    almgren_with(&Functionals::with_defaults(w)?, u, x0, radii, Provenance::ExactPoly)
}

/// Monotonicity verdict over an increasing radius ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneReport {
    pub monotone: bool,
    /// Largest decrease `v_i - v_{i+1}` between consecutive radii (0 if none).
    pub max_violation: f64,
    pub tolerance: f64,
}

pub fn monotone_report(values: &[f64], tolerance: f64) -> MonotoneReport {
    let max_violation = values.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
    MonotoneReport { monotone: max_violation <= tolerance, max_violation, tolerance }
}

/// Comparison of `d/dr log H` against `2N/r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogHReport {
    pub max_relative_deviation: f64,
}

pub fn log_h_derivative_check(profile: &FrequencyProfile) -> Result<LogHReport> {
    if profile.samples.len() < 3 {
        return Err(Error::InvalidArgument("log H check needs at least 3 radii".into()));
    }
    let mut dev: f64 = 0.0;
    for s in &profile.samples {
        let rhs = 2.0 * s.n / s.r;
        let scale = rhs.abs().max(s.dlog_h.abs());
        if scale < 1e-12 {
            continue;
        }
        dev = dev.max((s.dlog_h - rhs).abs() / scale);
    }
    Ok(LogHReport { max_relative_deviation: dev })
}

/// Doubling inequality over all radius pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoublingReport {
    /// `N` used as the bound: the frequency at the largest radius.
    pub n_bound: f64,
    pub pairs: usize,
    /// Largest `log(H(r2) / (H(r1)(r2/r1)^{2N}))`; `<= 0` when the inequality holds.
    pub max_log_excess: f64,
    /// Largest `|H(r2) / (H(r1)(r2/r1)^{2N}) - 1|`, zero for homogeneous fields.
    pub max_equality_deviation: f64,
    pub holds: bool,
    /// Ball form with exponent `2N`.
    pub ball_holds: bool,
    /// Ball form with exponent `2N - 1`, recorded for comparison only.
    pub ball_minus_one_holds: bool,
}

pub fn doubling_check(profile: &FrequencyProfile, tolerance: f64) -> DoublingReport {
    let s = &profile.samples;
    let nb = s.last().map_or(0.0, |x| x.n);
    let (mut pairs, mut excess, mut eq) = (0, f64::NEG_INFINITY, 0.0f64);
    let (mut ball, mut ball1) = (true, true);
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            pairs += 1;
            let lr = (s[j].r / s[i].r).ln();
            let e = s[j].h.ln() - s[i].h.ln() - 2.0 * nb * lr;
            excess = excess.max(e);
            eq = eq.max(e.exp_m1().abs());
            let eb = s[j].ball_l2.ln() - s[i].ball_l2.ln();
            ball &= eb - 2.0 * nb * lr <= tolerance;
            ball1 &= eb - (2.0 * nb - 1.0) * lr <= tolerance;
        }
    }
    DoublingReport {
        n_bound: nb,
        pairs,
        max_log_excess: excess,
        max_equality_deviation: eq,
        holds: excess <= tolerance,
        ball_holds: ball,
        ball_minus_one_holds: ball1,
    }
}

/// `W_k(r) = r^{-2k}(E(r) - k H(r))` over a profile's radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeissProfile {
    pub center: Vec<f64>,
    pub k: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn weiss(profile: &FrequencyProfile, k: f64) -> WeissProfile {
    WeissProfile {
        center: profile.center.clone(),
        k,
        radii: profile.radii(),
        values: profile.samples.iter().map(|s| s.r.powf(-2.0 * k) * (s.e - k * s.h)).collect(),
    }
}

/// `M(r)` for a reference blow-up `p` of homogeneity `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonneauProfile {
    pub center: Vec<f64>,
    pub k: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn monneau(fun: &Functionals, u: &dyn Field, x0: &[f64], p: &dyn Field, k: f64, radii: &[f64]) -> Result<MonneauProfile> {
    let mut rs = radii.to_vec();
    rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let values = rs.iter().map(|&r| fun.monneau_value(u, p, k, x0, r)).collect::<Result<Vec<_>>>()?;
    Ok(MonneauProfile { center: x0.to_vec(), k, radii: rs, values })
}

/// Parity of a field at a nodal point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Antisymmetric,
    Mixed,
}

/// `N(X0, u, 0+) >= 1` for symmetric fields and `>= 1 - a` for antisymmetric ones,
/// read at the smallest radius with tolerance `1e-3`.
pub fn frequency_lower_bound_check(profile: &FrequencyProfile, parity: Parity) -> bool {
    let bound = match parity {
        Parity::Symmetric => 1.0,
        Parity::Antisymmetric => 1.0 - profile.a,
        Parity::Mixed => 1.0f64.min(1.0 - profile.a),
    };
    profile.samples.first().is_some_and(|s| s.n >= bound - 1e-3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Combo, ExactField};
    use crate::poly::{parse_ratio, planar_even, planar_odd, FloatPoly, MultiPoly, Q};
    use std::sync::Arc;

    fn exact(p: &MultiPoly<Q>, a: f64) -> ExactField {
        ExactField::from_poly(p, a)
    }

    #[test]
    fn homogeneous_frequencies() {
        for s in ["-1/2", "1/4"] {
            let aq = parse_ratio(s).unwrap();
            let a = crate::poly::ratio_to_f64(&aq);
            let w = WeightParam::new(1, a).unwrap();
            let radii = [0.25, 0.5, 1.0];
            for k in 1..=6 {
                let u = exact(&crate::poly::planar(k, &aq).unwrap(), a);
                let prof = almgren(&u, &[0.0, 0.0], &radii, &w).unwrap();
                for smp in &prof.samples {
                    assert!((smp.n - k as f64).abs() < 1e-10, "a={s} k={k}: {}", smp.n);
                    assert!((smp.e - smp.e_boundary).abs() < 1e-10 * smp.e);
                }
                let wk = weiss(&prof, k as f64);
                assert!(wk.values.iter().all(|v| v.abs() < 1e-10));
                let d = doubling_check(&prof, 1e-12);
                assert!(d.holds && d.max_equality_deviation < 1e-10 && d.ball_holds);
                assert!(!d.ball_minus_one_holds);
                let lh = log_h_derivative_check(&prof).unwrap();
                assert!(lh.max_relative_deviation < 1e-8, "{lh:?}");
            }
            let odd = ExactField::antisymmetric(FloatPoly::new(1, vec![(vec![0, 0], 1.0)]), a);
            let prof = almgren(&odd, &[0.0, 0.0], &radii, &w).unwrap();
            for smp in &prof.samples {
                assert!((smp.n - (1.0 - a)).abs() < 1e-10, "{}", smp.n);
            }
            assert!(frequency_lower_bound_check(&prof, Parity::Antisymmetric));
        }
    }

    #[test]
    fn composite_is_monotone() {
        let aq = parse_ratio("1/4").unwrap();
        let a = 0.25;
        let w = WeightParam::new(1, a).unwrap();
        let x: Arc<dyn Field> = Arc::new(exact(&MultiPoly::var(1, 0), a));
        let p2: Arc<dyn Field> = Arc::new(exact(&planar_even(2, &aq).unwrap(), a));
        let u = Combo::new(vec![(1.0, x), (0.1, p2)]);
        let radii = geometric_radii(1.0, 1.0 / 128.0, 8);
        let prof = almgren(&u, &[0.0, 0.0], &radii, &w).unwrap();
        let m = monotone_report(&prof.frequencies(), 1e-10);
        assert!(m.monotone, "{m:?}");
        assert!((prof.limit_frequency() - 1.0).abs() < 1e-3);
        let lh = log_h_derivative_check(&prof).unwrap();
        assert!(lh.max_relative_deviation < 1e-6, "{lh:?}");
        let w1 = weiss(&prof, 1.0);
        assert!(monotone_report(&w1.values, 1e-10).monotone);
    }

    #[test]
    fn weiss_of_quadratic_at_k1() {
        // W_1 = r^{-2}(E - H) = r^{-2} (2 - 1) H for a 2-homogeneous field
        let aq = parse_ratio("-1/2").unwrap();
        let w = WeightParam::new(1, -0.5).unwrap();
        let u = exact(&planar_even(2, &aq).unwrap(), -0.5);
        let prof = almgren(&u, &[0.0, 0.0], &[0.25, 0.5, 1.0], &w).unwrap();
        let w1 = weiss(&prof, 1.0);
        for (s, v) in prof.samples.iter().zip(&w1.values) {
            assert!((v - s.h / (s.r * s.r)).abs() < 1e-10 * v);
        }
        assert!(monotone_report(&w1.values, 0.0).monotone);
    }

    #[test]
    fn monneau_of_perturbed_blowup() {
        // u = p + q with deg q = 3 > 2: M(r) = r^{2} ∫ q², increasing
        let aq = parse_ratio("1/4").unwrap();
        let a = 0.25;
        let w = WeightParam::new(1, a).unwrap();
        let fun = Functionals::with_defaults(&w).unwrap();
        let p = planar_even(2, &aq).unwrap();
        let q = planar_odd(3, &aq).unwrap();
        let u = exact(&p.add(&q), a);
        let pf = exact(&p, a);
        let radii = [0.25, 0.5, 1.0];
        let m = monneau(&fun, &u, &[0.0, 0.0], &pf, 2.0, &radii).unwrap();
        let q2 = crate::poly::weighted_moment(&q.mul(&q), 1.0, &w).unwrap().sphere;
        for (r, v) in radii.iter().zip(&m.values) {
            assert!((v - r * r * q2).abs() < 1e-10 * q2, "{v} vs {}", r * r * q2);
        }
        let m0 = monneau(&fun, &pf, &[0.0, 0.0], &pf, 2.0, &radii).unwrap();
        assert!(m0.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn negative_controls() {
        let w = WeightParam::new(1, 0.0).unwrap();
        let zero = ExactField::poly(FloatPoly::zero(1), 0.0);
        assert!(matches!(almgren(&zero, &[0.0, 0.0], &[0.5], &w), Err(Error::DegenerateSphere { .. })));
        // a synthetic profile with decreasing N fails the doubling bound
        let mk = |r: f64, h: f64, n: f64| RadiusSample { r, h, e: n * h, n, dlog_h: 0.0, e_boundary: 0.0, ball_l2: h };
        let prof = FrequencyProfile {
            center: vec![0.0, 0.0],
            a: 0.0,
            n: 1,
            provenance: Provenance::ExactPoly,
            samples: vec![mk(0.25, 1.0, 3.0), mk(0.5, 64.0, 2.0), mk(1.0, 256.0, 1.0)],
        };
        assert!(!doubling_check(&prof, 1e-12).holds);
        assert!(!monotone_report(&prof.frequencies(), 1e-6).monotone);
        let c = ExactField::poly(FloatPoly::new(1, vec![(vec![0, 0], 2.0)]), 0.0);
        let prof = almgren(&c, &[0.0, 0.0], &[0.25, 0.5, 1.0], &w).unwrap();
        assert!(prof.samples.iter().all(|s| s.n.abs() < 1e-14 && s.dlog_h.abs() < 1e-10));
    }

    #[test]
    fn scale_and_rescale_invariance() {
        use crate::field::Rescaled;
        let aq = parse_ratio("1/4").unwrap();
        let a = 0.25;
        let w = WeightParam::new(1, a).unwrap();
        let fun = Functionals::with_defaults(&w).unwrap();
        let u = exact(&MultiPoly::var(1, 0).add(&planar_odd(3, &aq).unwrap()), a);
        let x0 = [0.1, 0.0];
        let n1 = fun.sample(&u, &x0, 0.4).unwrap().n;
        let n2 = fun.sample(&u.scaled(7.0), &x0, 0.4).unwrap().n;
        assert!((n1 - n2).abs() < 1e-12);
        let resc = Rescaled { inner: &u, center: x0.to_vec(), r: 0.8, scale: 3.0 };
        let n3 = fun.sample(&resc, &[0.0, 0.0], 0.5).unwrap().n;
        assert!((n1 - n3).abs() < 1e-12);
    }

    #[test]
    fn radii_ladder() {
        let r = geometric_radii(1.0, 0.01, 3);
        assert_eq!(r.len(), 3);
        assert!((r[0] - 0.01).abs() < 1e-15 && (r[1] - 0.1).abs() < 1e-15 && r[2] == 1.0);
    }
}
