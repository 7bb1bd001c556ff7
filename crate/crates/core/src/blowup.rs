//! Blow-ups at nodal points: rescalings, vanishing orders snapped to the
//! admissible spectrum `(1 + N) ∪ ((1 - a) + N)`, least-squares tangent maps,
//! tangent fields and the stratum of a nodal point.

use crate::error::{Error, Result};
use crate::field::{ExactField, Field, ParityPart, Rescaled};
use crate::monotonicity::{extrapolate_limit, geometric_radii, FunctionalConfig, Functionals, Parity, Provenance};
use crate::poly::{symmetric_basis, Exponents, FloatPoly, Q};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::collections::BTreeMap;

/// How a blow-up is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Divide by `sqrt(H(X0, u, r))`: unit weighted sphere norm.
    HNormalized,
    /// Divide by `r^k`.
    Homogeneous(f64),
}

/// `X ↦ u(X0 + rX)` divided by the normalization.
pub fn rescale<'a>(fun: &Functionals, u: &'a dyn Field, x0: &[f64], r: f64, mode: Normalization) -> Result<Rescaled<&'a dyn Field>> {
    let scale = match mode {
        Normalization::HNormalized => 1.0 / fun.h(u, x0, r)?.sqrt(),
        Normalization::Homogeneous(k) => {
            if !(r > 0.0) {
                return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
            }
            r.powf(-k)
        }
    };
    Ok(Rescaled { inner: u, center: x0.to_vec(), r, scale })
}

/// Tolerances and radii used by the blow-up analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupOptions {
    /// Ladder for the frequency limit `N(X0, u, 0+)`.
    pub radii: Vec<f64>,
    /// Two radii for the tangent-map fit; the first is the one reported.
    pub fit_radii: [f64; 2],
    pub snap_tol: f64,
    /// `X0` is nodal when `|u(X0)| <= zero_tol · sup_{B_rmax} |u|`.
    pub zero_tol: f64,
    /// A parity part is absent when its sup is below `absent_tol` times the sup of `u`.
    pub absent_tol: f64,
    pub y_dependence_tol: f64,
    /// Relative singular-value cutoff for the spine rank.
    pub rank_tol: f64,
    pub nondegeneracy_tol: f64,
    pub functionals: FunctionalConfig,
    pub provenance: Provenance,
}

impl BlowupOptions {
    /// Settings for fields that can be evaluated at any scale.
    pub fn exact() -> Self {
        BlowupOptions {
            radii: geometric_radii(0.5, 1e-6, 12),
            fit_radii: [1e-2, 5e-3],
            snap_tol: 1e-2,
            zero_tol: 1e-10,
            absent_tol: 1e-12,
            y_dependence_tol: 1e-3,
            rank_tol: 1e-6,
            nondegeneracy_tol: 1e-6,
            functionals: FunctionalConfig::default(),
            provenance: Provenance::ExactPoly,
        }
    }

    /// Settings for interpolated grid fields with spacing `h`, using radii up to `reach`.
    pub fn grid(h: f64, reach: f64) -> Self {
        BlowupOptions {
            radii: geometric_radii(reach, 8.0 * h, 8),
            fit_radii: [32.0 * h, 16.0 * h],
            rank_tol: 1e-4,
            provenance: Provenance::Grid,
            ..Self::exact()
        }
    }

    fn r_max(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }
}

/// Estimated vanishing order at a nodal point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub center: Vec<f64>,
    /// Extrapolated `N(X0, u, 0+)`.
    pub k_raw: f64,
    /// Nearest admissible order, when within the snapping tolerance.
    pub k_snapped: Option<f64>,
    /// Parity of the lattice that `k_snapped` belongs to.
    pub parity: Option<Parity>,
    pub distance: f64,
    /// Both lattices lie within twice the tolerance of `k_raw`.
    pub ambiguous: bool,
    /// `(r, N(r))` over the ladder.
    pub profile: Vec<(f64, f64)>,
}

/// Nearest point of `1 + N` and of `(1 - a) + N`, with distances.
pub fn lattice_neighbors(k: f64, a: f64) -> ((f64, f64), (f64, f64)) {
    let ks = k.round().max(1.0);
    let off = 1.0 - a;
    let ka = off + (k - off).round().max(0.0);
    ((ks, (k - ks).abs()), (ka, (k - ka).abs()))
}

/// Snaps `k` to the admissible spectrum: `(k_snapped, parity, distance, ambiguous)`.
pub fn snap_order(k: f64, a: f64, tol: f64) -> (Option<f64>, Option<Parity>, f64, bool) {
    let ((ks, ds), (ka, da)) = lattice_neighbors(k, a);
    let ambiguous = ds <= 2.0 * tol && da <= 2.0 * tol;
    let (kk, par, d) = if ds <= da { (ks, Parity::Symmetric, ds) } else { (ka, Parity::Antisymmetric, da) };
    if d <= tol {
        (Some(kk), Some(par), d, ambiguous)
    } else {
        (None, None, d, ambiguous)
    }
}

fn sphere_sup(fun: &Functionals, u: &dyn Field, x0: &[f64], r: f64) -> f64 {
    let d = x0.len();
    let mut p = vec![0.0; d];
    let mut m = 0.0f64;
    for (q, _) in fun.sphere_rule().iter() {
        for i in 0..d {
            p[i] = x0[i] + r * q[i];
        }
        m = m.max(u.value(&p).abs());
    }
    m
}

fn ensure_nodal(fun: &Functionals, u: &dyn Field, x0: &[f64], opts: &BlowupOptions) -> Result<f64> {
    let sup = sphere_sup(fun, u, x0, opts.r_max()).max(sphere_sup(fun, u, x0, 0.5 * opts.r_max()));
    let v = u.value(x0).abs();
    if !(v <= opts.zero_tol * sup) || sup == 0.0 {
        return Err(Error::NotNodal(x0.to_vec(), v));
    }
    Ok(sup)
}

/// `N(X0, u, 0+)` over the options' ladder, snapped to the spectrum. The
/// frequency is taken in boundary form, `r ∫ u ∂_r u / H`, which agrees
/// with `E/H` for solutions.
pub fn vanishing_order(fun: &Functionals, u: &dyn Field, x0: &[f64], opts: &BlowupOptions) -> Result<OrderEstimate> {
    ensure_nodal(fun, u, x0, opts)?;
    let mut radii = opts.radii.clone();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let profile = radii.iter().map(|&r| Ok((r, fun.boundary_frequency(u, x0, r)?))).collect::<Result<Vec<_>>>()?;
    let k_raw = match profile.len() {
        0 => return Err(Error::InvalidArgument("empty radius ladder".into())),
        1 | 2 => profile[0].1,
        _ => extrapolate_limit(profile[2].1, profile[1].1, profile[0].1),
    };
    let (k_snapped, parity, distance, ambiguous) = snap_order(k_raw, fun.w.a, opts.snap_tol);
    Ok(OrderEstimate { center: x0.to_vec(), k_raw, k_snapped, parity, distance, ambiguous, profile })
}

/// Least-squares tangent map at one radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentFit {
    pub k: f64,
    pub parity: Parity,
    pub radius: f64,
    /// Monomials `x^α` on `Σ` whose extensions form the basis.
    pub labels: Vec<Exponents>,
    pub coefficients: Vec<f64>,
    /// `Σ c_α G(x^α)`; for antisymmetric fits this is the factor `v` of `v·y|y|^{-a}`.
    #[serde(skip)]
    pub polynomial: FloatPoly,
    /// Weighted sphere norm of the rescaled field minus the fit.
    pub residual: f64,
    pub relative_residual: f64,
    pub coefficient_norm: f64,
    /// `sup_{∂B_r} |u| / r^k`.
    pub field_scale: f64,
    pub nondegenerate: bool,
}

impl TangentFit {
    pub fn field(&self, a: f64) -> ExactField {
        match self.parity {
            Parity::Antisymmetric => ExactField::antisymmetric(self.polynomial.clone(), a),
            _ => ExactField::poly(self.polynomial.clone(), a),
        }
    }

    /// Share of the coefficient mass on monomials that involve `y`; `1` for antisymmetric maps.
    pub fn y_dependence(&self) -> f64 {
        if self.parity == Parity::Antisymmetric {
            return 1.0;
        }
        let d = self.polynomial.n();
        let (mut with_y, mut all) = (0.0, 0.0);
        for (e, c) in self.polynomial.terms() {
            all += c * c;
            if e[d] > 0 {
                with_y += c * c;
            }
        }
        if all == 0.0 {
            0.0
        } else {
            (with_y / all).sqrt()
        }
    }
}

/// Degree on `Σ` of the basis polynomials for order `k` in the given parity.
fn basis_degree(k: f64, parity: Parity, a: f64) -> Result<u32> {
    let base = match parity {
        Parity::Symmetric => k,
        Parity::Antisymmetric => k - (1.0 - a),
        Parity::Mixed => return Err(Error::WrongParity("a tangent map has a single parity".into())),
    };
    let j = base.round();
    if (base - j).abs() > 1e-9 || j < 0.0 || (parity == Parity::Symmetric && j < 1.0) {
        return Err(Error::InvalidArgument(format!("order {k} is not on the {parity:?} lattice for a = {a}")));
    }
    Ok(j as u32)
}

fn rational(a: f64) -> Result<Q> {
    Q::from_float(a).ok_or_else(|| Error::InvalidArgument(format!("a = {a} is not finite")))
}

/// Basis of homogeneous solutions of order `k`: Garofalo extensions of the
/// monomials of the right degree, for the conjugate weight when antisymmetric.
pub fn tangent_basis(n: usize, k: f64, parity: Parity, a: f64) -> Result<Vec<(Exponents, FloatPoly)>> {
    let j = basis_degree(k, parity, a)?;
    let aq = rational(a)?;
    let wq = if parity == Parity::Antisymmetric { Q::from_integer(2.into()) - aq } else { aq };
    let wf = if parity == Parity::Antisymmetric { 2.0 - a } else { a };
    let labels = crate::poly::monomials(n, j);
    let polys = symmetric_basis(n, j, &wq)?;
    Ok(labels.into_iter().zip(polys.iter().map(|p| p.to_float(wf))).collect())
}

fn combine(n: usize, parts: &[(f64, &FloatPoly)]) -> FloatPoly {
    let mut acc: BTreeMap<Exponents, f64> = BTreeMap::new();
    for (c, p) in parts {
        for (e, v) in p.terms() {
            *acc.entry(e.clone()).or_insert(0.0) += c * v;
        }
    }
    FloatPoly::new(n, acc.into_iter().filter(|(_, v)| *v != 0.0).collect())
}

/// Fits `u(X0 + rZ)/r^k` on the unit sphere against the order-`k` basis of the given parity.
pub fn tangent_map_fit(
    fun: &Functionals,
    u: &dyn Field,
    x0: &[f64],
    k: f64,
    parity: Parity,
    r: f64,
    opts: &BlowupOptions,
) -> Result<TangentFit> {
    let (n, a) = (fun.w.n, fun.w.a);
    if x0.len() != n + 1 || u.dim() != n + 1 {
        return Err(Error::InvalidArgument(format!("field and center must have {} coordinates", n + 1)));
    }
    let basis = tangent_basis(n, k, parity, a)?;
    let fields: Vec<ExactField> = basis
        .iter()
        .map(|(_, p)| match parity {
            Parity::Antisymmetric => ExactField::antisymmetric(p.clone(), a),
            _ => ExactField::poly(p.clone(), a),
        })
        .collect();
    let rule = fun.sphere_rule();
    let nodes: Vec<(&[f64], f64)> = rule.iter().filter(|(_, w)| *w > 0.0).collect();
    let (rows, cols) = (nodes.len(), fields.len());
    let mut m = DMatrix::zeros(rows, cols);
    let mut b = DVector::zeros(rows);
    let mut p = vec![0.0; n + 1];
    let rk = r.powf(-k);
    let mut sup = 0.0f64;
    for (i, (q, w)) in nodes.iter().enumerate() {
        for t in 0..=n {
            p[t] = x0[t] + r * q[t];
        }
        let v = u.value(&p) * rk;
        if !v.is_finite() {
            return Err(Error::NonFinite(p.clone()));
        }
        sup = sup.max(v.abs());
        let sw = w.sqrt();
        b[i] = sw * v;
        for (j, f) in fields.iter().enumerate() {
            m[(i, j)] = sw * f.value(q);
        }
    }
    let svd = m.clone().svd(true, true);
    let c = svd.solve(&b, 1e-13).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let res = &m * &c - &b;
    let residual = res.norm();
    let coefficients: Vec<f64> = c.iter().copied().collect();
    let coefficient_norm = c.norm();
    let polynomial = combine(n, &coefficients.iter().zip(&basis).map(|(c, (_, p))| (*c, p)).collect::<Vec<_>>());
    Ok(TangentFit {
        k,
        parity,
        radius: r,
        labels: basis.into_iter().map(|(e, _)| e).collect(),
        coefficients,
        polynomial,
        residual,
        relative_residual: if b.norm() > 0.0 { residual / b.norm() } else { 0.0 },
        coefficient_norm,
        field_scale: sup,
        nondegenerate: coefficient_norm >= opts.nondegeneracy_tol * sup && coefficient_norm > 0.0,
    })
}

/// One parity part of the tangent field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartFit {
    pub parity: Parity,
    pub order: OrderEstimate,
    /// Order on the part's own lattice.
    pub k: f64,
    pub fit: TangentFit,
    /// Fit at the second radius.
    pub fit_small: TangentFit,
    /// `|c(r1) - c(r2)| / |c(r1)|`.
    pub agreement: f64,
}

/// `(φ_e, φ_o)`; a missing part vanishes identically near `X0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentField {
    pub center: Vec<f64>,
    pub even: Option<PartFit>,
    pub odd: Option<PartFit>,
}

impl TangentField {
    /// The part of lowest order; ties go to the even part.
    pub fn leading(&self) -> Option<&PartFit> {
        match (&self.even, &self.odd) {
            (Some(e), Some(o)) => Some(if o.k < e.k - 1e-9 { o } else { e }),
            (Some(e), None) => Some(e),
            (None, Some(o)) => Some(o),
            (None, None) => None,
        }
    }

    pub fn parity(&self) -> Option<Parity> {
        match (&self.even, &self.odd) {
            (Some(_), Some(_)) => Some(Parity::Mixed),
            (Some(_), None) => Some(Parity::Symmetric),
            (None, Some(_)) => Some(Parity::Antisymmetric),
            (None, None) => None,
        }
    }
}

fn part_fit(fun: &Functionals, part: &dyn Field, x0: &[f64], parity: Parity, opts: &BlowupOptions) -> Result<PartFit> {
    let a = fun.w.a;
    let order = vanishing_order(fun, part, x0, opts)?;
    let ((ks, ds), (ka, da)) = lattice_neighbors(order.k_raw, a);
    let (k, d) = if parity == Parity::Symmetric { (ks, ds) } else { (ka, da) };
    if d > opts.snap_tol {
        return Err(Error::InvalidArgument(format!(
            "{parity:?} part at {x0:?} has order {} away from its lattice",
            order.k_raw
        )));
    }
    let fit = tangent_map_fit(fun, part, x0, k, parity, opts.fit_radii[0], opts)?;
    let fit_small = tangent_map_fit(fun, part, x0, k, parity, opts.fit_radii[1], opts)?;
    let diff: f64 = fit.coefficients.iter().zip(&fit_small.coefficients).map(|(p, q)| (p - q) * (p - q)).sum();
    let agreement = if fit.coefficient_norm > 0.0 { diff.sqrt() / fit.coefficient_norm } else { f64::INFINITY };
    Ok(PartFit { parity, order, k, fit, fit_small, agreement })
}

/// Splits `u` into its even and odd parts in `y` and blows each up separately.
pub fn tangent_field(fun: &Functionals, u: &dyn Field, x0: &[f64], opts: &BlowupOptions) -> Result<TangentField> {
    let sup = ensure_nodal(fun, u, x0, opts)?;
    let even = ParityPart::even(u);
    let odd = ParityPart::odd(u);
    let r = opts.r_max();
    let present = |f: &dyn Field| {
        let s = sphere_sup(fun, f, x0, r).max(sphere_sup(fun, f, x0, 0.5 * r));
        s > opts.absent_tol * sup
    };
    let e = if present(&even) { Some(part_fit(fun, &even, x0, Parity::Symmetric, opts)?) } else { None };
    let o = if present(&odd) { Some(part_fit(fun, &odd, x0, Parity::Antisymmetric, opts)?) } else { None };
    Ok(TangentField { center: x0.to_vec(), even: e, odd: o })
}

/// Stratum of a nodal point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Stratum {
    /// On `Σ`, even part of order 1.
    RegularOrthogonal,
    /// On `Σ`, odd part of order `1 - a`.
    RegularTangential,
    /// On `Σ`, singular with a `y`-independent tangent map.
    GammaStar { k: u32 },
    /// On `Σ`, singular with a `y`-dependent or antisymmetric tangent map.
    GammaA { k: f64 },
    /// Off `Σ` with nonvanishing gradient.
    Regular,
    /// Off `Σ` with vanishing gradient.
    InteriorSingular { k: u32 },
}

impl Stratum {
    pub fn is_regular(&self) -> bool {
        matches!(self, Stratum::RegularOrthogonal | Stratum::RegularTangential | Stratum::Regular)
    }

    pub fn label(&self) -> String {
        match self {
            Stratum::RegularOrthogonal => "regular-orthogonal".into(),
            Stratum::RegularTangential => "regular-tangential".into(),
            Stratum::GammaStar { k } => format!("gamma-star-{k}"),
            Stratum::GammaA { k } => format!("gamma-a-{k}"),
            Stratum::Regular => "regular".into(),
            Stratum::InteriorSingular { k } => format!("interior-singular-{k}"),
        }
    }
}

/// Classification of one nodal point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointClassification {
    pub center: Vec<f64>,
    pub k_raw: f64,
    pub k_snapped: f64,
    /// Parity of the tangent field; `None` off `Σ`.
    pub parity: Option<Parity>,
    /// Lattice of the order of `u` itself.
    pub order_parity: Option<Parity>,
    pub stratum: Stratum,
    pub spine_dim: Option<usize>,
    pub labels: Vec<Exponents>,
    pub coefficients: Vec<f64>,
    pub residual: f64,
    pub y_dependence: f64,
    pub tangent: Option<TangentField>,
}

/// Dimension of `{ξ ∈ R^n : ⟨ξ, ∇_x φ⟩ ≡ 0}` for a polynomial `φ`.
pub fn spine_dimension(phi: &FloatPoly, rank_tol: f64) -> usize {
    let n = phi.n();
    let mut cols: BTreeMap<Exponents, usize> = BTreeMap::new();
    let mut rows: Vec<BTreeMap<Exponents, f64>> = vec![BTreeMap::new(); n];
    for (e, c) in phi.terms() {
        for (i, row) in rows.iter_mut().enumerate() {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            let len = cols.len();
            cols.entry(d.clone()).or_insert(len);
            *row.entry(d).or_insert(0.0) += c * e[i] as f64;
        }
    }
    if cols.is_empty() {
        return n;
    }
    let mut m = DMatrix::zeros(n, cols.len());
    for (i, row) in rows.iter().enumerate() {
        for (e, v) in row {
            m[(i, cols[e])] = *v;
        }
    }
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    let rank = if top == 0.0 { 0 } else { sv.iter().filter(|&&s| s > rank_tol * top).count() };
    n - rank
}

/// Stratum, order, parity and spine dimension at a nodal point.
pub fn classify_point(fun: &Functionals, u: &dyn Field, x0: &[f64], opts: &BlowupOptions) -> Result<PointClassification> {
    let n = fun.w.n;
    if x0.len() != n + 1 {
        return Err(Error::InvalidArgument(format!("center must have {} coordinates", n + 1)));
    }
    if x0[n] != 0.0 {
        return classify_off_sigma(fun, u, x0, opts);
    }
    let a = fun.w.a;
    let tf = tangent_field(fun, u, x0, opts)?;
    let lead = tf.leading().ok_or_else(|| Error::NotNodal(x0.to_vec(), 0.0))?.clone();
    let order = if tf.parity() == Some(Parity::Mixed) { vanishing_order(fun, u, x0, opts)? } else { lead.order.clone() };
    let on = |k: f64, target: f64| (k - target).abs() < 1e-9;
    let stratum = match lead.parity {
        Parity::Symmetric if on(lead.k, 1.0) => Stratum::RegularOrthogonal,
        Parity::Antisymmetric if on(lead.k, 1.0 - a) => Stratum::RegularTangential,
        Parity::Symmetric if lead.fit.y_dependence() <= opts.y_dependence_tol => Stratum::GammaStar { k: lead.k as u32 },
        _ => Stratum::GammaA { k: lead.k },
    };
    Ok(PointClassification {
        center: x0.to_vec(),
        k_raw: order.k_raw,
        k_snapped: lead.k,
        parity: tf.parity(),
        order_parity: order.parity,
        stratum,
        spine_dim: Some(spine_dimension(&lead.fit.polynomial, opts.rank_tol)),
        labels: lead.fit.labels.clone(),
        coefficients: lead.fit.coefficients.clone(),
        residual: lead.fit.residual,
        y_dependence: lead.fit.y_dependence(),
        tangent: Some(tf),
    })
}

/// Away from `Σ` the operator is smooth and uniformly elliptic: a nodal
/// point is regular exactly when the gradient is nonzero, and otherwise its
/// order is read from the growth of the sphere sup.
fn classify_off_sigma(fun: &Functionals, u: &dyn Field, x0: &[f64], opts: &BlowupOptions) -> Result<PointClassification> {
    let d = x0.len();
    let rho = (0.25 * x0[d - 1].abs()).min(opts.r_max());
    let sup = sphere_sup(fun, u, x0, rho);
    let v = u.value(x0).abs();
    if !(v <= opts.zero_tol * sup) || sup == 0.0 {
        return Err(Error::NotNodal(x0.to_vec(), v));
    }
    let mut g = vec![0.0; d];
    u.gradient(x0, &mut g);
    let grad = g.iter().map(|t| t * t).sum::<f64>().sqrt();
    let (stratum, k_raw) = if grad * rho > 1e-6 * sup {
        (Stratum::Regular, 1.0)
    } else {
        let r1 = 1e-3 * rho;
        let k = (sphere_sup(fun, u, x0, r1) / sphere_sup(fun, u, x0, 0.5 * r1)).log2();
        (Stratum::InteriorSingular { k: k.round().max(2.0) as u32 }, k)
    };
    let k_snapped = match stratum {
        Stratum::InteriorSingular { k } => k as f64,
        _ => 1.0,
    };
    Ok(PointClassification {
        center: x0.to_vec(),
        k_raw,
        k_snapped,
        parity: None,
        order_parity: None,
        stratum,
        spine_dim: None,
        labels: Vec::new(),
        coefficients: g,
        residual: 0.0,
        y_dependence: 0.0,
        tangent: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{garofalo_extend, planar_even, planar_odd, MultiPoly};
    use crate::quadrature::WeightParam;

    fn q(a: f64) -> Q {
        Q::from_float(a).unwrap()
    }

    fn fun(n: usize, a: f64) -> Functionals {
        Functionals::with_defaults(&WeightParam::new(n, a).unwrap()).unwrap()
    }

    fn odd_y(n: usize, a: f64) -> ExactField {
        ExactField::antisymmetric(FloatPoly::new(n, vec![(vec![0; n + 1], 1.0)]), a)
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_order(2.004, 0.25, 1e-2).0, Some(2.0));
        assert_eq!(snap_order(0.751, 0.25, 1e-2).1, Some(Parity::Antisymmetric));
        assert_eq!(snap_order(1.3, 0.25, 1e-2).0, None);
        // a = 0 makes the two lattices coincide
        assert!(snap_order(2.0, 0.0, 1e-2).3);
        assert!(!snap_order(2.0, -0.5, 1e-2).3);
    }

    #[test]
    fn rescale_modes() {
        let a = 0.25;
        let f = fun(1, a);
        let p = ExactField::from_poly(&planar_even(2, &q(a)).unwrap(), a);
        let r = rescale(&f, &p, &[0.0, 0.0], 0.3, Normalization::Homogeneous(2.0)).unwrap();
        for z in [[0.2, 0.1], [-0.5, 0.7]] {
            assert!((r.value(&z) - p.value(&z)).abs() < 1e-14);
        }
        let r = rescale(&f, &p, &[0.0, 0.0], 0.3, Normalization::HNormalized).unwrap();
        assert!((f.h(&r, &[0.0, 0.0], 1.0).unwrap() - 1.0).abs() < 1e-10);
        // x + x^3 → x at rate r^2 in sup over B_1
        let u = ExactField::poly(FloatPoly::new(1, vec![(vec![1, 0], 1.0), (vec![3, 0], 1.0)]), a);
        let err = |rr: f64| {
            let s = rescale(&f, &u, &[0.0, 0.0], rr, Normalization::Homogeneous(1.0)).unwrap();
            (0..=20).map(|i| -1.0 + 0.1 * i as f64).map(|x| (s.value(&[x, 0.0]) - x).abs()).fold(0.0, f64::max)
        };
        assert!((err(1e-2) / err(5e-3) - 4.0).abs() < 1e-6);
    }

    #[test]
    fn orders_of_examples() {
        let opts = BlowupOptions::exact();
        for a in [-0.5, 0.25] {
            let f = fun(1, a);
            let o = vanishing_order(&f, &ExactField::from_poly(&planar_even(2, &q(a)).unwrap(), a), &[0.0, 0.0], &opts).unwrap();
            assert_eq!((o.k_snapped, o.parity), (Some(2.0), Some(Parity::Symmetric)));
            assert!((o.k_raw - 2.0).abs() < 1e-8);
            let o = vanishing_order(&f, &odd_y(1, a), &[0.0, 0.0], &opts).unwrap();
            assert_eq!((o.k_snapped, o.parity), (Some(1.0 - a), Some(Parity::Antisymmetric)));
            let xy = ExactField::antisymmetric(FloatPoly::new(1, vec![(vec![1, 0], 1.0)]), a);
            let o = vanishing_order(&f, &xy, &[0.0, 0.0], &opts).unwrap();
            assert_eq!(o.k_snapped, Some(2.0 - a));
            // mixed: the smaller order wins
            let mixed = ExactField::poly(FloatPoly::new(1, vec![(vec![1, 0], 1.0)]), a).plus(&odd_y(1, a));
            let o = vanishing_order(&f, &mixed, &[0.0, 0.0], &opts).unwrap();
            assert!((o.k_raw - (1.0f64).min(1.0 - a)).abs() < 1e-3, "{a} {}", o.k_raw);
        }
        let f = fun(1, 0.25);
        let one = ExactField::poly(FloatPoly::new(1, vec![(vec![0, 0], 1.0)]), 0.25);
        assert!(matches!(vanishing_order(&f, &one, &[0.0, 0.0], &opts), Err(Error::NotNodal(..))));
    }

    #[test]
    fn fits_recover_coefficients() {
        let a = -0.5;
        let f = fun(1, a);
        let opts = BlowupOptions::exact();
        let pe = planar_even(2, &q(a)).unwrap();
        let p = ExactField::from_poly(&pe, a);
        let fit = tangent_map_fit(&f, &p, &[0.0, 0.0], 2.0, Parity::Symmetric, 0.1, &opts).unwrap();
        assert!(fit.residual < 1e-8);
        let exact = pe.to_float(a);
        for (e, c) in exact.terms() {
            let got = fit.polynomial.terms().iter().find(|(g, _)| g == e).map_or(0.0, |t| t.1);
            assert!((got - c).abs() < 1e-8, "{e:?}");
        }
        // adding a degree-3 solution leaves the degree-2 fit unchanged, residual O(r)
        let u = p.plus(&ExactField::from_poly(&planar_odd(3, &q(a)).unwrap(), a));
        let r1 = tangent_map_fit(&f, &u, &[0.0, 0.0], 2.0, Parity::Symmetric, 0.02, &opts).unwrap();
        let r2 = tangent_map_fit(&f, &u, &[0.0, 0.0], 2.0, Parity::Symmetric, 0.01, &opts).unwrap();
        assert!((r1.coefficients[0] - fit.coefficients[0]).abs() < 1e-10);
        assert!((r1.residual / r2.residual - 2.0).abs() < 1e-6);
    }

    #[test]
    fn tangent_fields_of_composites() {
        let opts = BlowupOptions::exact();
        for a in [-0.5, 0.25] {
            let f = fun(1, a);
            let x = ExactField::poly(FloatPoly::new(1, vec![(vec![1, 0], 1.0)]), a);
            let t = tangent_field(&f, &x.plus(&odd_y(1, a)), &[0.0, 0.0], &opts).unwrap();
            assert_eq!(t.even.as_ref().unwrap().k, 1.0);
            assert_eq!(t.odd.as_ref().unwrap().k, 1.0 - a);
            let t = tangent_field(&f, &x, &[0.0, 0.0], &opts).unwrap();
            assert!(t.odd.is_none());
            let xy = ExactField::antisymmetric(FloatPoly::new(1, vec![(vec![1, 0], 1.0)]), a);
            let pe = ExactField::from_poly(&planar_even(2, &q(a)).unwrap(), a);
            let t = tangent_field(&f, &pe.plus(&xy), &[0.0, 0.0], &opts).unwrap();
            assert_eq!((t.even.as_ref().unwrap().k, t.odd.as_ref().unwrap().k), (2.0, 2.0 - a));
            assert!(t.even.unwrap().agreement < 1e-10);
        }
    }

    #[test]
    fn classification_examples() {
        let opts = BlowupOptions::exact();
        let a = 0.25;
        let f1 = fun(1, a);
        let x = ExactField::poly(FloatPoly::new(1, vec![(vec![1, 0], 1.0)]), a);
        assert_eq!(classify_point(&f1, &x, &[0.0, 0.0], &opts).unwrap().stratum, Stratum::RegularOrthogonal);
        let c = classify_point(&f1, &odd_y(1, a), &[0.3, 0.0], &opts).unwrap();
        assert_eq!(c.stratum, Stratum::RegularTangential);
        // x + y|y|^{-a}: the odd order 1 - a is smaller when a > 0
        let c = classify_point(&f1, &x.plus(&odd_y(1, a)), &[0.0, 0.0], &opts).unwrap();
        assert_eq!((c.stratum, c.parity), (Stratum::RegularTangential, Some(Parity::Mixed)));
        let f1n = fun(1, -0.5);
        let xn = ExactField::poly(FloatPoly::new(1, vec![(vec![1, 0], 1.0)]), -0.5);
        let c = classify_point(&f1n, &xn.plus(&odd_y(1, -0.5)), &[0.0, 0.0], &opts).unwrap();
        assert_eq!(c.stratum, Stratum::RegularOrthogonal);

        let f2 = fun(2, a);
        let pe = planar_even(2, &q(a)).unwrap();
        // embed as a polynomial in (x1, x2, y) independent of x2
        let lifted = MultiPoly::from_terms(2, pe.terms().map(|(e, c)| (vec![e[0], 0, e[1]], c.clone())));
        let c = classify_point(&f2, &ExactField::from_poly(&lifted, a), &[0.0, 0.4, 0.0], &opts).unwrap();
        assert_eq!((c.stratum, c.spine_dim), (Stratum::GammaA { k: 2.0 }, Some(1)));
        let h = MultiPoly::from_sigma(2, &[(vec![2, 0], Q::from_integer(1.into())), (vec![0, 2], Q::from_integer((-1).into()))]);
        let g = garofalo_extend(&h, &q(a)).unwrap();
        let c = classify_point(&f2, &ExactField::from_poly(&g, a), &[0.0, 0.0, 0.0], &opts).unwrap();
        assert_eq!((c.stratum, c.spine_dim), (Stratum::GammaStar { k: 2 }, Some(0)));
        assert!(c.y_dependence < 1e-4);
    }

    #[test]
    fn off_sigma_points() {
        let a = 0.25;
        let f = fun(1, a);
        let opts = BlowupOptions::exact();
        // planar_even(2) vanishes on x = ±y/sqrt(1+a)
        let p = ExactField::from_poly(&planar_even(2, &q(a)).unwrap(), a);
        let y = 0.4;
        let c = classify_point(&f, &p, &[y / (1.0 + a).sqrt(), y], &opts).unwrap();
        assert_eq!(c.stratum, Stratum::Regular);
    }
}
