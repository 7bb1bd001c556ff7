//! Named test fields with their known classification: homogeneous
//! solutions, mixed-parity composites, grid solutions and 1-D s-harmonic
//! constructions.

use crate::blowup::Stratum;
use crate::error::{Error, Result};
use crate::field::{ExactField, Field};
use crate::monotonicity::Parity;
use crate::nodal::real_root_directions;
use crate::poly::{garofalo_extend, planar_even, planar_odd, ratio_to_f64, FloatPoly, MultiPoly, Q};
use crate::quadrature::WeightParam;
use crate::sharm1d::{construct_order, SHarmonic1d};
use crate::solver::{solve_extension, GridDomain, GridField, GridParity, SolveReport, SolverOptions};
use serde::Serialize;
use std::sync::{Arc, OnceLock};

/// How a ground-truth value is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Immediate from the definition of the field.
    Construction,
    /// Worked out by hand or by an independent exact computation.
    Derivation,
    /// A proved property of the equation.
    Theorem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    Homogeneous,
    Composite,
    Solver,
    OneDimensional,
}

/// Known data at one nodal point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundTruthPoint {
    pub center: Vec<f64>,
    /// Replace `center[0]` by the nearest zero of the trace on `Σ` before use.
    pub locate_on_trace: bool,
    pub order: f64,
    /// Lattice containing the order of the whole field.
    pub order_parity: Parity,
    /// Parity of the tangent field.
    pub parity: Parity,
    pub stratum: Stratum,
    pub spine_dim: usize,
    pub source: Source,
}

/// Length of the nodal set in `B_radius` of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodalTruth {
    pub radius: f64,
    pub length: f64,
    pub source: Source,
}

/// A grid solution with exact boundary values taken from `data`.
#[derive(Debug, Clone)]
pub struct SolverRecipe {
    pub data: ExactField,
    pub half_width: f64,
    pub height: f64,
    pub nx: usize,
}

impl SolverRecipe {
    pub fn domain(&self) -> Result<GridDomain> {
        GridDomain::square(self.data.even.n(), self.half_width, self.height, self.nx)
    }

    pub fn solve(&self) -> Result<(GridField, SolveReport)> {
        let d = self.domain()?;
        let w = WeightParam::new(d.n, self.data.a)?;
        let data = self.data.clone();
        solve_extension(&move |p: &[f64]| data.value(p), GridParity::Symmetric, &w, &d, &SolverOptions { tol: 1e-12, ..Default::default() })
    }
}

/// Where the values of an entry come from.
#[derive(Clone)]
pub enum FieldSource {
    Exact(ExactField),
    Solver(SolverRecipe, Arc<OnceLock<std::result::Result<Arc<GridField>, Error>>>),
    Line(Arc<SHarmonic1d>),
}

/// One named field with its ground truth.
#[derive(Clone, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: EntryKind,
    /// Dimension of `Σ`; for 1-D entries the line itself.
    pub n: usize,
    pub a: f64,
    /// `a` as an exact rational string.
    pub a_exact: String,
    pub formula: String,
    pub homogeneity: Option<f64>,
    pub points: Vec<GroundTruthPoint>,
    pub nodal: Option<NodalTruth>,
    /// Vanishing order at 0 of the 1-D constructions.
    pub line_order: Option<u32>,
    #[serde(skip)]
    pub source: FieldSource,
}

impl std::fmt::Debug for CorpusEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CorpusEntry").field("name", &self.name).field("kind", &self.kind).finish()
    }
}

impl CorpusEntry {
    /// The field on `R^{n+1}`; grid entries are solved on first use.
    pub fn field(&self) -> Result<Arc<dyn Field>> {
        match &self.source {
            FieldSource::Exact(e) => Ok(Arc::new(e.clone())),
            FieldSource::Solver(r, cell) => {
                let g = cell.get_or_init(|| r.solve().map(|(g, _)| Arc::new(g)));
                g.clone().map(|g| g as Arc<dyn Field>)
            }
            FieldSource::Line(_) => Err(Error::InvalidArgument(format!("{} is a function on the line", self.name))),
        }
    }

    pub fn grid(&self) -> Option<Result<Arc<GridField>>> {
        match &self.source {
            FieldSource::Solver(r, cell) => Some(cell.get_or_init(|| r.solve().map(|(g, _)| Arc::new(g))).clone()),
            _ => None,
        }
    }

    pub fn exact(&self) -> Option<&ExactField> {
        match &self.source {
            FieldSource::Exact(e) => Some(e),
            _ => None,
        }
    }

    pub fn line(&self) -> Option<&SHarmonic1d> {
        match &self.source {
            FieldSource::Line(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self.source, FieldSource::Solver(..))
    }

    /// Ground-truth points with trace-located centres resolved.
    pub fn resolved_points(&self) -> Result<Vec<GroundTruthPoint>> {
        if self.points.iter().all(|p| !p.locate_on_trace) {
            return Ok(self.points.clone());
        }
        let u = self.field()?;
        self.points
            .iter()
            .map(|p| {
                let mut p = p.clone();
                if p.locate_on_trace {
                    p.center[0] = trace_root(&*u, &p.center, 0.25)?;
                    p.locate_on_trace = false;
                }
                Ok(p)
            })
            .collect()
    }
}

/// Zero of `x ↦ u(x, 0)` (first coordinate varying) bracketed in `[x0 - w, x0 + w]`.
pub fn trace_root(u: &dyn Field, x0: &[f64], w: f64) -> Result<f64> {
    let mut p = x0.to_vec();
    let mut g = |x: f64| {
        p[0] = x;
        u.value(&p)
    };
    let (mut lo, mut hi) = (x0[0] - w, x0[0] + w);
    let (mut glo, ghi) = (g(lo), g(hi));
    if (glo > 0.0) == (ghi > 0.0) {
        return Err(Error::InvalidArgument(format!("no sign change of the trace around {x0:?}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok(if g(lo).abs() <= g(hi).abs() { lo } else { hi })
}

struct Builder {
    a: f64,
    aq: Q,
    out: Vec<CorpusEntry>,
}

fn int(k: i64) -> Q {
    Q::from_integer(k.into())
}

fn one_dim_var(n: usize, i: usize, deg: u32) -> MultiPoly<Q> {
    let mut e = vec![0; n + 1];
    e[i] = deg;
    MultiPoly::monomial(e, int(1))
}

/// The regular stratum chosen by the smaller order, ties to the even part.
fn regular_of_mixed(a: f64) -> Stratum {
    if 1.0 - a < 1.0 {
        Stratum::RegularTangential
    } else {
        Stratum::RegularOrthogonal
    }
}

impl Builder {
    fn point(&self, center: Vec<f64>, order: f64, parity: Parity, stratum: Stratum, spine: usize, source: Source) -> GroundTruthPoint {
        let order_parity = if (order - order.round()).abs() < 1e-12 && order >= 1.0 { Parity::Symmetric } else { Parity::Antisymmetric };
        GroundTruthPoint { center, locate_on_trace: false, order, order_parity, parity, stratum, spine_dim: spine, source }
    }

    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, name: &str, kind: EntryKind, n: usize, formula: String, field: ExactField, homogeneity: Option<f64>, points: Vec<GroundTruthPoint>, nodal: Option<NodalTruth>) {
        self.out.push(CorpusEntry {
            name: name.into(),
            kind,
            n,
            a: self.a,
            a_exact: self.aq.to_string(),
            formula,
            homogeneity,
            points,
            nodal,
            line_order: None,
            source: FieldSource::Exact(field),
        });
    }

    fn exact(&self, p: &MultiPoly<Q>) -> ExactField {
        ExactField::from_poly(p, self.a)
    }

    fn odd(&self, v: &MultiPoly<Q>) -> ExactField {
        ExactField::antisymmetric(v.to_float(self.a), self.a)
    }

    /// Nodal length in `B_1` of a homogeneous planar polynomial from its root directions.
    fn planar_length(p: &MultiPoly<Q>) -> Result<NodalTruth> {
        let (k, axis) = real_root_directions(p)?;
        Ok(NodalTruth { radius: 1.0, length: 2.0 * k as f64 + if axis { 2.0 } else { 0.0 }, source: Source::Derivation })
    }
}

/// All entries for weight exponent `a` with polynomial degrees up to `max_degree`.
pub fn build_corpus(a: &Q, max_degree: u32) -> Result<Vec<CorpusEntry>> {
    if max_degree > 10 {
        return Err(Error::InvalidArgument(format!("max_degree must be at most 10, got {max_degree}")));
    }
    let af = ratio_to_f64(a);
    WeightParam::new(1, af)?;
    if !(af < 1.0) {
        return Err(Error::InvalidArgument(format!("a must lie in (-1, 1), got {af}")));
    }
    let mut b = Builder { a: af, aq: a.clone(), out: Vec::new() };
    let sym = Parity::Symmetric;
    let anti = Parity::Antisymmetric;
    let o1 = vec![0.0, 0.0];
    let o2 = vec![0.0, 0.0, 0.0];
    let x = one_dim_var(1, 0, 1);
    let one = MultiPoly::constant(1, int(1));

    // homogeneous planar solutions
    let pts = vec![
        b.point(o1.clone(), 1.0, sym, Stratum::RegularOrthogonal, 0, Source::Construction),
        b.point(vec![0.0, 0.5], 1.0, sym, Stratum::Regular, 0, Source::Construction),
    ];
    let nod = Some(NodalTruth { radius: 1.0, length: 2.0, source: Source::Construction });
    b.push("linear_x", EntryKind::Homogeneous, 1, "x".into(), b.exact(&x), Some(1.0), pts, nod);

    let pts = vec![
        b.point(o1.clone(), 1.0 - af, anti, Stratum::RegularTangential, 1, Source::Theorem),
        b.point(vec![0.5, 0.0], 1.0 - af, anti, Stratum::RegularTangential, 1, Source::Theorem),
    ];
    let nod = Some(NodalTruth { radius: 1.0, length: 2.0, source: Source::Construction });
    b.push("odd_y", EntryKind::Homogeneous, 1, "y|y|^{-a}".into(), b.odd(&one), Some(1.0 - af), pts, nod);

    let pts = vec![
        b.point(o1.clone(), 2.0 - af, anti, Stratum::GammaA { k: 2.0 - af }, 0, Source::Derivation),
        b.point(vec![0.5, 0.0], 1.0 - af, anti, Stratum::RegularTangential, 1, Source::Derivation),
    ];
    let nod = Some(NodalTruth { radius: 1.0, length: 4.0, source: Source::Construction });
    b.push("odd_xy", EntryKind::Homogeneous, 1, "x y|y|^{-a}".into(), b.odd(&x), Some(2.0 - af), pts, nod);

    for k in [2u32, 4, 6].into_iter().filter(|&k| k <= max_degree) {
        let p = planar_even(k, a)?;
        let pts = vec![b.point(o1.clone(), k as f64, sym, Stratum::GammaA { k: k as f64 }, 0, Source::Theorem)];
        let nod = Some(Builder::planar_length(&p)?);
        b.push(&format!("planar_even_{k}"), EntryKind::Homogeneous, 1, p.to_string(), b.exact(&p), Some(k as f64), pts, nod);
    }
    if max_degree >= 3 {
        let p = planar_odd(3, a)?;
        let pts = vec![
            b.point(o1.clone(), 3.0, sym, Stratum::GammaA { k: 3.0 }, 0, Source::Theorem),
            b.point(vec![0.0, 0.5], 1.0, sym, Stratum::Regular, 0, Source::Derivation),
        ];
        let nod = Some(Builder::planar_length(&p)?);
        b.push("planar_odd_3", EntryKind::Homogeneous, 1, p.to_string(), b.exact(&p), Some(3.0), pts, nod);
    }

    // extensions of polynomials on Σ = R^2
    let sig = |terms: &[([u32; 2], i64)]| MultiPoly::from_sigma(2, &terms.iter().map(|(e, c)| (e.to_vec(), int(*c))).collect::<Vec<_>>());
    if max_degree >= 2 {
        let g = garofalo_extend(&sig(&[([1, 1], 1)]), a)?;
        let pts = vec![b.point(o2.clone(), 2.0, sym, Stratum::GammaStar { k: 2 }, 0, Source::Derivation)];
        b.push("harmonic_x1x2_ext", EntryKind::Homogeneous, 2, g.to_string(), b.exact(&g), Some(2.0), pts, None);

        let g = garofalo_extend(&sig(&[([2, 0], 1), ([0, 2], -1)]), a)?;
        let pts = vec![b.point(o2.clone(), 2.0, sym, Stratum::GammaStar { k: 2 }, 0, Source::Derivation)];
        b.push("harmonic_x1sq_minus_x2sq_ext", EntryKind::Homogeneous, 2, g.to_string(), b.exact(&g), Some(2.0), pts, None);

        let lifted = planar_even(2, a)?.extend_dims(1);
        let pts = vec![
            b.point(o2.clone(), 2.0, sym, Stratum::GammaA { k: 2.0 }, 1, Source::Derivation),
            b.point(vec![0.0, 0.5, 0.0], 2.0, sym, Stratum::GammaA { k: 2.0 }, 1, Source::Derivation),
        ];
        b.push("planar_even_2_lifted", EntryKind::Homogeneous, 2, lifted.to_string(), b.exact(&lifted), Some(2.0), pts, None);
    }
    if max_degree >= 4 {
        let g = garofalo_extend(&sig(&[([2, 2], 1)]), a)?;
        let pts = vec![
            b.point(o2.clone(), 4.0, sym, Stratum::GammaA { k: 4.0 }, 0, Source::Derivation),
            // near (0, t, 0) the field is t²(x1² - y²/(1+a)) plus higher order
            b.point(vec![0.0, 0.5, 0.0], 2.0, sym, Stratum::GammaA { k: 2.0 }, 1, Source::Derivation),
        ];
        b.push("x1sq_x2sq_ext", EntryKind::Homogeneous, 2, g.to_string(), b.exact(&g), Some(4.0), pts, None);
    }

    // mixed and non-homogeneous composites
    let lin = b.exact(&x);
    let oy = b.odd(&one);
    let mixed_reg = regular_of_mixed(af);
    let spine = if mixed_reg == Stratum::RegularTangential { 1 } else { 0 };
    let order = 1.0f64.min(1.0 - af);
    let pts = vec![b.point(o1.clone(), order, Parity::Mixed, mixed_reg, spine, Source::Derivation)];
    b.push("mixed_x_plus_odd_y", EntryKind::Composite, 1, "x + y|y|^{-a}".into(), lin.plus(&oy), None, pts, None);

    if max_degree >= 3 {
        let pe2 = b.exact(&planar_even(2, a)?);
        let oxy = b.odd(&x);
        let (k, st) = if 2.0 - af < 2.0 { (2.0 - af, Stratum::GammaA { k: 2.0 - af }) } else { (2.0, Stratum::GammaA { k: 2.0 }) };
        let pts = vec![b.point(o1.clone(), k, Parity::Mixed, st, 0, Source::Derivation)];
        b.push("mixed_even2_plus_odd_xy", EntryKind::Composite, 1, "planar_even_2 + x y|y|^{-a}".into(), pe2.plus(&oxy), None, pts, None);

        let po3 = b.exact(&planar_odd(3, a)?);
        let pts = vec![b.point(o1.clone(), 2.0, sym, Stratum::GammaA { k: 2.0 }, 0, Source::Derivation)];
        b.push("even2_plus_odd3", EntryKind::Composite, 1, "planar_even_2 + planar_odd_3".into(), pe2.plus(&po3), None, pts, None);

        let pts = vec![b.point(o1.clone(), 1.0, sym, Stratum::RegularOrthogonal, 0, Source::Derivation)];
        b.push("x_plus_even2", EntryKind::Composite, 1, "x + planar_even_2".into(), lin.plus(&pe2), None, pts, None);
    }
    if max_degree >= 4 {
        let h = b.exact(&garofalo_extend(&sig(&[([2, 0], 1), ([0, 2], -1)]), a)?);
        let q4 = b.exact(&garofalo_extend(&sig(&[([2, 2], 1)]), a)?);
        let pts = vec![b.point(o2.clone(), 2.0, sym, Stratum::GammaStar { k: 2 }, 0, Source::Derivation)];
        b.push("harmonic2_plus_x1sq_x2sq_ext", EntryKind::Composite, 2, "G(x1^2 - x2^2) + G(x1^2 x2^2)".into(), h.plus(&q4), None, pts, None);
    }

    // grid solutions; the first two reproduce their data exactly
    let recipes: Vec<(&str, ExactField, usize, GroundTruthPoint)> = {
        let x1x2 = b.exact(&garofalo_extend(&sig(&[([1, 1], 1)]), a)?);
        let mut generic = b.point(o1.clone(), 1.0, sym, Stratum::RegularOrthogonal, 0, Source::Derivation);
        generic.locate_on_trace = true;
        vec![
            ("solver_linear_x", lin.clone(), 129, b.point(o1.clone(), 1.0, sym, Stratum::RegularOrthogonal, 0, Source::Construction)),
            ("solver_x1x2", x1x2, 65, b.point(o2.clone(), 2.0, sym, Stratum::GammaStar { k: 2 }, 0, Source::Derivation)),
            ("solver_x_plus_even2", lin.plus(&b.exact(&planar_even(2, a)?)), 129, generic),
        ]
    };
    for (name, data, nx, pt) in recipes {
        let n = data.even.n();
        b.out.push(CorpusEntry {
            name: name.into(),
            kind: EntryKind::Solver,
            n,
            a: af,
            a_exact: a.to_string(),
            formula: format!("grid solution with boundary values of {}", poly_string(&data)),
            homogeneity: None,
            points: vec![pt],
            nodal: None,
            line_order: None,
            source: FieldSource::Solver(SolverRecipe { data, half_width: 1.0, height: 1.0, nx }, Arc::new(OnceLock::new())),
        });
    }

    // s-harmonic functions on the line with s = (1 - a)/2
    let s = 0.5 * (1.0 - af);
    for k in 1..=3u32 {
        let t = construct_order(k, s)?;
        b.out.push(CorpusEntry {
            name: format!("sharm1d_order_{k}"),
            kind: EntryKind::OneDimensional,
            n: 1,
            a: af,
            a_exact: a.to_string(),
            formula: format!("exterior (x^2-1)^s g(1/x), g = {}", t.g),
            homogeneity: None,
            points: Vec::new(),
            nodal: None,
            line_order: Some(k),
            source: FieldSource::Line(Arc::new(SHarmonic1d::from_tail(t))),
        });
    }
    Ok(b.out)
}

fn poly_string(e: &ExactField) -> String {
    let show = |p: &FloatPoly| {
        p.terms()
            .iter()
            .map(|(ex, c)| format!("{c:+}·{ex:?}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    match &e.odd {
        Some(v) if !v.terms().is_empty() => format!("{} + ({})·y|y|^-a", show(&e.even), show(v)),
        _ => show(&e.even),
    }
}

/// The default weights of the corpus.
pub fn default_exponents() -> Vec<Q> {
    vec![Q::new((-1).into(), 2.into()), Q::new(1.into(), 4.into())]
}
