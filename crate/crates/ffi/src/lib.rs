//! C interface to `la_nodal`.
//!
//! Fields are opaque `LaField` handles created by the `la_field_*`
//! constructors and released with [`la_field_free`]. Every fallible call
//! returns an [`LaStatus`]; on failure the message is available from
//! [`la_last_error`] on the same thread. Outputs are written through caller
//! pointers only on success.

use la_nodal::blowup::{classify_point, vanishing_order, BlowupOptions, Stratum};
use la_nodal::field::{ExactField, Field};
use la_nodal::monotonicity::{almgren_with, Functionals, Parity, Provenance};
use la_nodal::nodal::{extract_nodal, measure_boxcount, Disk, Rect, SampledGrid};
use la_nodal::poly::{garofalo_extend, planar, planar_even, planar_odd, MultiPoly, Q};
use la_nodal::quadrature::WeightParam;
use la_nodal::solver::{solve_extension, GridDomain, GridParity, SolverOptions};
use la_nodal::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    WrongParity = 3,
    /// The point is outside the domain or is not a zero of the field.
    Domain = 4,
    /// A computation did not converge or produced no usable value.
    Numerical = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

/// Planar families accepted by [`la_field_planar`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaFamily {
    Even = 0,
    Odd = 1,
    /// Even for even degree, odd for odd degree.
    Planar = 2,
}

/// Stratum codes reported by [`la_classify`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaStratum {
    RegularOrthogonal = 0,
    RegularTangential = 1,
    GammaStar = 2,
    GammaA = 3,
    Regular = 4,
    InteriorSingular = 5,
}

/// Parity codes; `LA_PARITY_NONE` off `Σ`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaParity {
    None = 0,
    Symmetric = 1,
    Antisymmetric = 2,
    Mixed = 3,
}

/// Classification of one nodal point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaClassification {
    pub k_raw: f64,
    pub k_snapped: f64,
    pub stratum: LaStratum,
    pub parity: LaParity,
    /// `-1` when not defined (regular points off `Σ`).
    pub spine_dim: i32,
    /// Residual of the tangent-map fit.
    pub residual: f64,
}

/// Opaque field on `R^{n+1}`.
pub struct LaField {
    field: Arc<dyn Field>,
    /// Closed form, when there is one.
    exact: Option<ExactField>,
    n: usize,
    a: f64,
    grid_h: Option<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LaStatus {
    match e {
        Error::InvalidArgument(_) | Error::Parse(_) | Error::NonIntegrableWeight(_) | Error::Io(_) => LaStatus::InvalidArgument,
        Error::WrongParity(_) => LaStatus::WrongParity,
        Error::Domain(..) | Error::NotNodal(..) => LaStatus::Domain,
        _ => LaStatus::Numerical,
    }
}

struct Fail(LaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(LaStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LaStatus::Ok
        }
        Ok(Err(Fail(s, m))) => {
            set_error(&m);
            s
        }
        Err(p) => {
            let m = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned()).unwrap_or_default();
            set_error(&format!("internal error: {m}"));
            LaStatus::Internal
        }
    }
}

fn rational(num: i64, den: i64) -> Result<Q, Fail> {
    if den == 0 {
        return Err(Fail(LaStatus::InvalidArgument, "zero denominator".into()));
    }
    Ok(Q::new(num.into(), den.into()))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn field<'a>(f: *const LaField) -> Result<&'a LaField, Fail> {
    f.as_ref().ok_or_else(|| null("field"))
}

fn emit(out: *mut *mut LaField, f: LaField) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { *out = Box::into_raw(Box::new(f)) };
    Ok(())
}

fn exact(p: ExactField, n: usize, a: f64) -> LaField {
    LaField { field: Arc::new(p.clone()), exact: Some(p), n, a, grid_h: None }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn la_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn la_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Homogeneous planar solution of degree `k` for `a = a_num / a_den`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn la_field_planar(family: LaFamily, k: u32, a_num: i64, a_den: i64, out: *mut *mut LaField) -> LaStatus {
    guard(|| {
        let a = rational(a_num, a_den)?;
        let af = a_num as f64 / a_den as f64;
        WeightParam::new(1, af)?;
        let p = match family {
            LaFamily::Even => planar_even(k, &a)?,
            LaFamily::Odd => planar_odd(k, &a)?,
            LaFamily::Planar => planar(k, &a)?,
        };
        emit(out, exact(ExactField::from_poly(&p, af), 1, af))
    })
}

/// Extension of the monomial `x^α` on `Σ = R^n` (`n = len`) to a solution.
///
/// # Safety
/// `alpha` must point to `len` values and `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn la_field_extension(alpha: *const u32, len: usize, a_num: i64, a_den: i64, out: *mut *mut LaField) -> LaStatus {
    guard(|| {
        if alpha.is_null() {
            return Err(null("alpha"));
        }
        if len == 0 {
            return Err(Fail(LaStatus::InvalidArgument, "need at least one exponent".into()));
        }
        let mut e = std::slice::from_raw_parts(alpha, len).to_vec();
        e.push(0);
        let a = rational(a_num, a_den)?;
        let af = a_num as f64 / a_den as f64;
        WeightParam::new(len, af)?;
        let p = garofalo_extend(&MultiPoly::monomial(e, Q::from_integer(1.into())), &a)?;
        emit(out, exact(ExactField::from_poly(&p, af), len, af))
    })
}

/// `v · y|y|^{-a}` where `v` is the planar solution of degree `k` for the
/// conjugate weight `2 - a`; it vanishes on `Σ` and solves the equation for `a`.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn la_field_antisymmetric(k: u32, a_num: i64, a_den: i64, out: *mut *mut LaField) -> LaStatus {
    guard(|| {
        let a = rational(a_num, a_den)?;
        let af = a_num as f64 / a_den as f64;
        WeightParam::new(1, af)?;
        let conj = Q::from_integer(2.into()) - a;
        let v = planar(k, &conj)?.to_float(2.0 - af);
        emit(out, exact(ExactField::antisymmetric(v, af), 1, af))
    })
}

/// `c_f f + c_g g` for two fields with the same dimension and weight.
///
/// # Safety
/// `f` and `g` must be live handles and `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn la_field_combine(c_f: f64, f: *const LaField, c_g: f64, g: *const LaField, out: *mut *mut LaField) -> LaStatus {
    guard(|| {
        let (f, g) = (field(f)?, field(g)?);
        if f.n != g.n || f.a != g.a {
            return Err(Fail(LaStatus::InvalidArgument, "fields differ in dimension or weight".into()));
        }
        let combo = la_nodal::field::Combo::new(vec![(c_f, f.field.clone()), (c_g, g.field.clone())]);
        let grid_h = match (f.grid_h, g.grid_h) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        };
        let exact = match (&f.exact, &g.exact) {
            (Some(x), Some(y)) => Some(x.scaled(c_f).plus(&y.scaled(c_g))),
            _ => None,
        };
        let field: Arc<dyn Field> = match &exact {
            Some(e) => Arc::new(e.clone()),
            None => Arc::new(combo),
        };
        emit(out, LaField { field, exact, n: f.n, a: f.a, grid_h })
    })
}

/// Grid solution of the Dirichlet problem on `[-L, L]^n × [0, H]` with data
/// taken from `data`, which must be even or odd in `y`.
///
/// # Safety
/// `data` must be a live handle and `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn la_solve(data: *const LaField, nx: usize, half_width: f64, height: f64, tol: f64, out: *mut *mut LaField) -> LaStatus {
    guard(|| {
        let d = field(data)?;
        let domain = GridDomain::square(d.n, half_width, height, nx)?;
        let w = WeightParam::new(d.n, d.a)?;
        let parity = match &d.exact {
            Some(e) => {
                let odd = e.odd.as_ref().is_some_and(|v| !v.terms().is_empty());
                match (e.even.terms().is_empty(), odd) {
                    (false, true) => return Err(Fail(LaStatus::WrongParity, "data must be even or odd in y".into())),
                    (true, true) => GridParity::Antisymmetric,
                    _ => GridParity::Symmetric,
                }
            }
            None => GridParity::Symmetric,
        };
        let u = d.field.clone();
        let opts = SolverOptions { tol, ..Default::default() };
        let (g, _) = solve_extension(&move |p: &[f64]| u.value(p), parity, &w, &domain, &opts)?;
        let h = g.domain.hx();
        emit(out, LaField { field: Arc::new(g), exact: None, n: d.n, a: d.a, grid_h: Some(h) })
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn la_field_free(f: *mut LaField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Dimension `n` of `Σ`; the field lives on `R^{n+1}`. Returns 0 for null.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn la_field_dim(f: *const LaField) -> usize {
    f.as_ref().map_or(0, |f| f.n)
}

/// Value at `point` (`n + 1` coordinates).
///
/// # Safety
/// `point` must hold `n + 1` values and `out` be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn la_field_value(f: *const LaField, point: *const f64, out: *mut f64) -> LaStatus {
    guard(|| {
        let f = field(f)?;
        let p = slice(point, f.n + 1, "point")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = f.field.value(p);
        Ok(())
    })
}

fn functionals(f: &LaField) -> Result<Functionals, Fail> {
    Ok(Functionals::with_defaults(&WeightParam::new(f.n, f.a)?)?)
}

fn options(f: &LaField) -> BlowupOptions {
    f.grid_h.map_or_else(BlowupOptions::exact, |h| BlowupOptions::grid(h, 0.5))
}

/// Almgren frequency `N(center, r)` at each of `count` radii, written to `out_n`
/// in the order of `radii`.
///
/// # Safety
/// `center` must hold `n + 1` values; `radii` and `out_n` must hold `count`.
#[no_mangle]
pub unsafe extern "C" fn la_frequency(f: *const LaField, center: *const f64, radii: *const f64, count: usize, out_n: *mut f64) -> LaStatus {
    guard(|| {
        let f = field(f)?;
        let x0 = slice(center, f.n + 1, "center")?;
        let rs = slice(radii, count, "radii")?;
        if out_n.is_null() {
            return Err(null("out_n"));
        }
        let fun = functionals(f)?;
        let prov = if f.grid_h.is_some() { Provenance::Grid } else { Provenance::ExactPoly };
        let mut values = Vec::with_capacity(count);
        for &r in rs {
            values.push(almgren_with(&fun, &*f.field, x0, &[r], prov)?.samples[0].n);
        }
        std::slice::from_raw_parts_mut(out_n, count).copy_from_slice(&values);
        Ok(())
    })
}

/// Vanishing order at a nodal point: the extrapolated frequency limit and
/// its snapped value (`NAN` when no admissible order is close).
///
/// # Safety
/// `center` must hold `n + 1` values; the outputs must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn la_vanishing_order(f: *const LaField, center: *const f64, k_raw: *mut f64, k_snapped: *mut f64) -> LaStatus {
    guard(|| {
        let f = field(f)?;
        let x0 = slice(center, f.n + 1, "center")?;
        if k_raw.is_null() || k_snapped.is_null() {
            return Err(null("output"));
        }
        let o = vanishing_order(&functionals(f)?, &*f.field, x0, &options(f))?;
        *k_raw = o.k_raw;
        *k_snapped = o.k_snapped.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Order, tangent parity, stratum and spine dimension at a nodal point.
///
/// # Safety
/// `center` must hold `n + 1` values and `out` be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn la_classify(f: *const LaField, center: *const f64, out: *mut LaClassification) -> LaStatus {
    guard(|| {
        let f = field(f)?;
        let x0 = slice(center, f.n + 1, "center")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = classify_point(&functionals(f)?, &*f.field, x0, &options(f))?;
        *out = LaClassification {
            k_raw: c.k_raw,
            k_snapped: c.k_snapped,
            stratum: match c.stratum {
                Stratum::RegularOrthogonal => LaStratum::RegularOrthogonal,
                Stratum::RegularTangential => LaStratum::RegularTangential,
                Stratum::GammaStar { .. } => LaStratum::GammaStar,
                Stratum::GammaA { .. } => LaStratum::GammaA,
                Stratum::Regular => LaStratum::Regular,
                Stratum::InteriorSingular { .. } => LaStratum::InteriorSingular,
            },
            parity: match c.parity {
                None => LaParity::None,
                Some(Parity::Symmetric) => LaParity::Symmetric,
                Some(Parity::Antisymmetric) => LaParity::Antisymmetric,
                Some(Parity::Mixed) => LaParity::Mixed,
            },
            spine_dim: c.spine_dim.map_or(-1, |d| d as i32),
            residual: c.residual,
        };
        Ok(())
    })
}

/// Length of the nodal set in the disk of `radius` about the origin of the
/// plane, by box counting on a `cells × cells` sample grid (`n = 1` only).
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn la_nodal_length(f: *const LaField, radius: f64, cells: usize, out: *mut f64) -> LaStatus {
    guard(|| {
        let f = field(f)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if f.n != 1 {
            return Err(Fail(LaStatus::InvalidArgument, "nodal length is computed in the plane".into()));
        }
        if !(radius > 0.0) || cells < 2 {
            return Err(Fail(LaStatus::InvalidArgument, "need a positive radius and at least 2 cells".into()));
        }
        let grid = SampledGrid::from_field(&*f.field, Rect::square(radius), cells, cells)?;
        let set = extract_nodal(&grid, 1e-12);
        *out = measure_boxcount(&set, &Disk { center: [0.0, 0.0], radius }).extrapolated;
        Ok(())
    })
}
