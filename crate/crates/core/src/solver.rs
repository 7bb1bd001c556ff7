//! Conservative finite-volume solver for `div(|y|^a ∇v) = 0` on the half-box
//! `[-L, L]^n × [0, H]`, `n ∈ {1, 2}`.
//!
//! The grid is vertex-centred with `Σ` a grid line. The control volume of a
//! node on `Σ` is the half cell `[0, h/2]`, so no flux face sits on `Σ` and
//! the symmetric condition `|y|^a ∂_y v = 0` is the absence of that face. The
//! antisymmetric problem fixes `v = 0` on `Σ`.
//!
//! Control-volume `y`-measures are exact integrals of `y^a`. Vertical face
//! conductances come from [`FaceWeight`].

use crate::error::{Error, Result};
use crate::field::Field;
use crate::quadrature::WeightParam;
use rayon::prelude::*;
use serde::Serialize;

/// Reflection parity of a grid field across `Σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridParity {
    Symmetric,
    Antisymmetric,
}

impl GridParity {
    pub fn sign(self) -> f64 {
        match self {
            GridParity::Symmetric => 1.0,
            GridParity::Antisymmetric => -1.0,
        }
    }
}

/// How the weight `y^a` enters the vertical face conductances of the
/// symmetric problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceWeight {
    /// `y_{j+1/2}^a`; exact for `y²` and second order overall.
    Midpoint,
    /// `(1/h) ∫_{y_j}^{y_{j+1}} y^a dy`.
    CellAverage,
}

/// Tensor grid on `[-L, L]^n × [0, H]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDomain {
    pub n: usize,
    pub half_width: f64,
    pub height: f64,
    /// Nodes per `x` axis.
    pub nx: usize,
    /// Nodes in `y`, including `Σ`.
    pub ny: usize,
}

impl GridDomain {
    pub fn new(n: usize, half_width: f64, height: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(1..=2).contains(&n) {
            return Err(Error::InvalidArgument(format!("solver supports n = 1 or 2, got {n}")));
        }
        if nx < 5 || ny < 5 {
            return Err(Error::InvalidArgument("need at least 5 nodes per axis".into()));
        }
        if !(half_width > 0.0 && height > 0.0) {
            return Err(Error::InvalidArgument("extents must be positive".into()));
        }
        Ok(GridDomain { n, half_width, height, nx, ny })
    }

    /// Square cells: `ny` follows from `nx` so that `h_y = h_x`.
    pub fn square(n: usize, half_width: f64, height: f64, nx: usize) -> Result<Self> {
        let h = 2.0 * half_width / (nx as f64 - 1.0);
        let ny = (height / h).round() as usize + 1;
        Self::new(n, half_width, h * (ny as f64 - 1.0), nx, ny)
    }

    pub fn hx(&self) -> f64 {
        2.0 * self.half_width / (self.nx as f64 - 1.0)
    }

    pub fn hy(&self) -> f64 {
        self.height / (self.ny as f64 - 1.0)
    }

    /// Nodes per `y`-row.
    pub fn row_len(&self) -> usize {
        self.nx.pow(self.n as u32)
    }

    pub fn len(&self) -> usize {
        self.row_len() * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid indices `(i_1, .., i_n, j)` of a flat index.
    pub fn unflatten(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n + 1);
        let mut r = idx % self.row_len();
        for _ in 0..self.n {
            out.push(r % self.nx);
            r /= self.nx;
        }
        out.push(idx / self.row_len());
        out
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        let g = self.unflatten(idx);
        let mut p: Vec<f64> = g[..self.n].iter().map(|&i| -self.half_width + i as f64 * self.hx()).collect();
        p.push(g[self.n] as f64 * self.hy());
        p
    }

    fn is_fixed(&self, idx: usize, parity: GridParity) -> bool {
        let g = self.unflatten(idx);
        let j = g[self.n];
        g[..self.n].iter().any(|&i| i == 0 || i == self.nx - 1)
            || j == self.ny - 1
            || (parity == GridParity::Antisymmetric && j == 0)
    }
}

/// `∫_lo^hi y^a dy` for `0 <= lo < hi`.
fn int_pow(lo: f64, hi: f64, a: f64) -> f64 {
    (hi.powf(1.0 + a) - lo.powf(1.0 + a)) / (1.0 + a)
}

/// Five- or seven-point stencil coefficients, constant along rows.
#[derive(Debug, Clone)]
struct Stencil {
    /// Horizontal coupling per row `j`.
    cx: Vec<f64>,
    /// Vertical coupling across face `j + 1/2`.
    cy: Vec<f64>,
    fixed: Vec<bool>,
    diag: Vec<f64>,
    /// `1 / A_ii` at free nodes, zero at fixed nodes.
    inv_diag: Vec<f64>,
    strides: Vec<usize>,
    row: usize,
}

impl Stencil {
    fn new(dom: &GridDomain, a: f64, parity: GridParity, fw: FaceWeight) -> Self {
        let (hx, hy) = (dom.hx(), dom.hy());
        let n = dom.n;
        let cx: Vec<f64> = (0..dom.ny)
            .map(|j| {
                let y = j as f64 * hy;
                let m = if j == 0 { int_pow(0.0, 0.5 * hy, a) } else { int_pow(y - 0.5 * hy, (y + 0.5 * hy).min(dom.height), a) };
                hx.powi(n as i32 - 2) * m
            })
            .collect();
        let cy: Vec<f64> = (0..dom.ny - 1)
            .map(|j| {
                let (lo, hi) = (j as f64 * hy, (j + 1) as f64 * hy);
                let w = match parity {
                    // exact for the one-dimensional solution y^{1-a}
                    GridParity::Antisymmetric => hy / int_pow(lo, hi, -a),
                    GridParity::Symmetric => match fw {
                        FaceWeight::Midpoint => (0.5 * (lo + hi)).powf(a),
                        FaceWeight::CellAverage => int_pow(lo, hi, a) / hy,
                    },
                };
                hx.powi(n as i32) * w / hy
            })
            .collect();
        let fixed: Vec<bool> = (0..dom.len()).map(|i| dom.is_fixed(i, parity)).collect();
        let strides: Vec<usize> = (0..n).map(|d| dom.nx.pow(d as u32)).collect();
        let row = dom.row_len();
        let mut st = Stencil { cx, cy, fixed, diag: Vec::new(), inv_diag: Vec::new(), strides, row };
        st.diag = (0..dom.len())
            .map(|idx| {
                let j = idx / row;
                let mut d = 2.0 * n as f64 * st.cx[j];
                if j + 1 < dom.ny {
                    d += st.cy[j];
                }
                if j > 0 {
                    d += st.cy[j - 1];
                }
                d
            })
            .collect();
        st.inv_diag = st.diag.iter().zip(&st.fixed).map(|(d, &f)| if f { 0.0 } else { 1.0 / d }).collect();
        st
    }

    /// `(A u)_p = Σ_nb c (u_p - u_nb)` at free nodes, zero at fixed nodes.
    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let row = self.row;
        let ny = self.cx.len();
        out.par_chunks_mut(row).enumerate().for_each(|(j, o)| {
            let base = j * row;
            for (k, ov) in o.iter_mut().enumerate() {
                let idx = base + k;
                if self.fixed[idx] {
                    *ov = 0.0;
                    continue;
                }
                let up = u[idx];
                let mut s = 0.0;
                for &st in &self.strides {
                    s += self.cx[j] * (2.0 * up - u[idx - st] - u[idx + st]);
                }
                if j + 1 < ny {
                    s += self.cy[j] * (up - u[idx + row]);
                }
                if j > 0 {
                    s += self.cy[j - 1] * (up - u[idx - row]);
                }
                *ov = s;
            }
        });
    }

    fn scaled_max(&self, r: &[f64]) -> f64 {
        r.par_chunks(4096)
            .zip(self.inv_diag.par_chunks(4096))
            .map(|(c, d)| c.iter().zip(d).map(|(v, w)| (v * w).abs()).fold(0.0, f64::max))
            .reduce(|| 0.0, f64::max)
    }
}

/// Deterministic parallel dot product (fixed chunking, ordered reduction).
fn dot(a: &[f64], b: &[f64]) -> f64 {
    const CHUNK: usize = 4096;
    let parts: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum())
        .collect();
    parts.iter().sum()
}

/// Solver controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Stop when `max_i |r_i| / A_ii <= tol`.
    pub tol: f64,
    pub max_iter: usize,
    pub face_weight: FaceWeight,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-11, max_iter: 100_000, face_weight: FaceWeight::Midpoint }
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    /// Final scaled residual, recomputed from the returned field.
    pub residual: f64,
    /// Scaled residual every 25 iterations.
    pub history: Vec<f64>,
}

/// Node values on a [`GridDomain`] with their reflection parity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridField {
    pub domain: GridDomain,
    pub parity: GridParity,
    pub a: f64,
    pub face_weight: FaceWeight,
    pub values: Vec<f64>,
}

/// Solves `L_a v = 0` with `v = data` on the outer boundary (and `v = 0` on
/// `Σ` in the antisymmetric case).
pub fn solve_extension(
    data: &(dyn Fn(&[f64]) -> f64 + Sync),
    parity: GridParity,
    w: &WeightParam,
    domain: &GridDomain,
    opts: &SolverOptions,
) -> Result<(GridField, SolveReport)> {
    if w.n != domain.n {
        return Err(Error::InvalidArgument("weight and grid dimensions differ".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let st = Stencil::new(domain, w.a, parity, opts.face_weight);
    let len = domain.len();
    let mut u: Vec<f64> = (0..len)
        .into_par_iter()
        .map(|i| {
            if !st.fixed[i] || (parity == GridParity::Antisymmetric && i < st.row) {
                0.0
            } else {
                data(&domain.coords(i))
            }
        })
        .collect();
    // solve A e = -A u0 for the interior correction
    let mut r = vec![0.0; len];
    st.apply(&u, &mut r);
    r.par_iter_mut().for_each(|v| *v = -*v);
    let inv_diag = &st.inv_diag;
    let mut z: Vec<f64> = r.iter().zip(inv_diag).map(|(a, b)| a * b).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; len];
    let mut rz = dot(&r, &z);
    let mut history = Vec::new();
    let mut res = st.scaled_max(&r);
    let mut it = 0;
    while res > opts.tol {
        if it >= opts.max_iter || !res.is_finite() {
            return Err(Error::NoConvergence { iterations: it, residual: res, history });
        }
        st.apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        u.par_iter_mut().zip(&p).for_each(|(x, q)| *x += alpha * q);
        r.par_iter_mut().zip(&ap).for_each(|(x, q)| *x -= alpha * q);
        res = st.scaled_max(&r);
        it += 1;
        if it % 25 == 0 {
            history.push(res);
        }
        z.par_iter_mut().zip(&r).zip(inv_diag).for_each(|((zv, rv), d)| *zv = rv * d);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        p.par_iter_mut().zip(&z).for_each(|(pv, zv)| *pv = zv + beta * *pv);
    }
    let field = GridField { domain: domain.clone(), parity, a: w.a, face_weight: opts.face_weight, values: u };
    let residual = residual_norm(&field);
    Ok((field, SolveReport { iterations: it, residual, history }))
}

/// Scaled discrete residual `max_i |(A v)_i| / A_ii` over free nodes.
pub fn residual_norm(field: &GridField) -> f64 {
    let st = Stencil::new(&field.domain, field.a, field.parity, field.face_weight);
    let mut r = vec![0.0; field.values.len()];
    st.apply(&field.values, &mut r);
    st.scaled_max(&r)
}

/// Extremes of a solved field: boundary data range and interior range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxPrinciple {
    pub boundary_min: f64,
    pub boundary_max: f64,
    pub interior_min: f64,
    pub interior_max: f64,
    pub holds: bool,
}

/// Discrete maximum principle: interior values within the range of the
/// Dirichlet data (up to `slack`).
pub fn max_principle(field: &GridField, slack: f64) -> MaxPrinciple {
    let dom = &field.domain;
    let (mut bmin, mut bmax, mut imin, mut imax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (i, &v) in field.values.iter().enumerate() {
        if dom.is_fixed(i, field.parity) {
            bmin = bmin.min(v);
            bmax = bmax.max(v);
        } else {
            imin = imin.min(v);
            imax = imax.max(v);
        }
    }
    let holds = imin >= bmin - slack && imax <= bmax + slack;
    MaxPrinciple { boundary_min: bmin, boundary_max: bmax, interior_min: imin, interior_max: imax, holds }
}

/// Cubic Lagrange weights and derivative weights at offsets `-1, 0, 1, 2`.
fn cubic(s: f64) -> ([f64; 4], [f64; 4]) {
    let w = [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ];
    let d = [
        -(3.0 * s * s - 6.0 * s + 2.0) / 6.0,
        (3.0 * s * s - 4.0 * s - 1.0) / 2.0,
        -(3.0 * s * s - 2.0 * s - 2.0) / 2.0,
        (3.0 * s * s - 1.0) / 6.0,
    ];
    (w, d)
}

impl GridField {
    /// Samples `f` at every node (used for exact fields and initial data).
    pub fn sample(domain: &GridDomain, f: &(dyn Fn(&[f64]) -> f64 + Sync), parity: GridParity, a: f64) -> Self {
        let values = (0..domain.len()).into_par_iter().map(|i| f(&domain.coords(i))).collect();
        GridField { domain: domain.clone(), parity, a, face_weight: FaceWeight::Midpoint, values }
    }

    pub fn at(&self, g: &[usize]) -> f64 {
        let mut idx = 0;
        let mut stride = 1;
        for &i in &g[..self.domain.n] {
            idx += i * stride;
            stride *= self.domain.nx;
        }
        self.values[idx + g[self.domain.n] * self.domain.row_len()]
    }

    /// Value and gradient at `p` with `y >= 0`, by tensor cubic interpolation
    /// using ghost rows mirrored through `Σ`.
    fn interp(&self, p: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let dom = &self.domain;
        let n = dom.n;
        let (hx, hy) = (dom.hx(), dom.hy());
        let mut base = [0i64; 3];
        let mut wts = [([0.0; 4], [0.0; 4]); 3];
        for d in 0..n {
            let t = (p[d] + dom.half_width) / hx;
            let i0 = (t.floor() as i64).clamp(1, dom.nx as i64 - 3);
            base[d] = i0;
            wts[d] = cubic(t - i0 as f64);
        }
        let t = p[n] / hy;
        let j0 = (t.floor() as i64).clamp(0, dom.ny as i64 - 3);
        base[n] = j0;
        wts[n] = cubic(t - j0 as f64);
        let sign = self.parity.sign();
        // y-rows of the stencil, mirrored through Σ below it
        let mut rows = [(0usize, 1.0f64); 4];
        for (o, r) in rows.iter_mut().enumerate() {
            let j = j0 + o as i64 - 1;
            *r = if j < 0 { ((-j) as usize, sign) } else { (j as usize, 1.0) };
        }
        let row = dom.row_len();
        let (mut val, mut g) = (0.0, [0.0; 3]);
        let xs = |d: usize, o: usize| (base[d] + o as i64 - 1) as usize;
        for (oy, &(j, mirror)) in rows.iter().enumerate() {
            let (wy, dwy) = (wts[n].0[oy], wts[n].1[oy]);
            if n == 1 {
                for ox in 0..4 {
                    let v = mirror * self.values[xs(0, ox) + j * row];
                    let (wx, dwx) = (wts[0].0[ox], wts[0].1[ox]);
                    val += wx * wy * v;
                    g[0] += dwx * wy * v;
                    g[1] += wx * dwy * v;
                }
            } else {
                for o2 in 0..4 {
                    let (w2, dw2) = (wts[1].0[o2], wts[1].1[o2]);
                    for o1 in 0..4 {
                        let v = mirror * self.values[xs(0, o1) + xs(1, o2) * dom.nx + j * row];
                        let (w1, dw1) = (wts[0].0[o1], wts[0].1[o1]);
                        val += w1 * w2 * wy * v;
                        g[0] += dw1 * w2 * wy * v;
                        g[1] += w1 * dw2 * wy * v;
                        g[2] += w1 * w2 * dwy * v;
                    }
                }
            }
        }
        if let Some(out) = grad {
            for d in 0..n {
                out[d] = g[d] / hx;
            }
            out[n] = g[n] / hy;
        }
        val
    }

    /// CSV rows `x.., y, value`.
    pub fn to_csv(&self) -> String {
        let names = crate::poly::multi::var_names(self.domain.n);
        let mut s = names.join(",") + ",value\n";
        for (i, v) in self.values.iter().enumerate() {
            for c in self.domain.coords(i) {
                s.push_str(&format!("{c:.16e},"));
            }
            s.push_str(&format!("{v:.16e}\n"));
        }
        s
    }

    /// JSON header `{L, H, shape, a, parity}`.
    pub fn header(&self) -> serde_json::Value {
        let mut shape = vec![self.domain.nx; self.domain.n];
        shape.push(self.domain.ny);
        serde_json::json!({
            "L": self.domain.half_width,
            "H": self.domain.height,
            "shape": shape,
            "a": self.a,
            "parity": self.parity,
        })
    }
}

impl Field for GridField {
    fn dim(&self) -> usize {
        self.domain.n + 1
    }

    fn value(&self, p: &[f64]) -> f64 {
        let n = self.domain.n;
        if p[n] < 0.0 {
            let mut q = p.to_vec();
            q[n] = -q[n];
            return self.parity.sign() * self.interp(&q, None);
        }
        self.interp(p, None)
    }

    fn gradient(&self, p: &[f64], g: &mut [f64]) {
        let n = self.domain.n;
        if p[n] < 0.0 {
            let mut q = p.to_vec();
            q[n] = -q[n];
            self.interp(&q, Some(g));
            let s = self.parity.sign();
            for (d, v) in g.iter_mut().enumerate() {
                *v *= if d == n { -s } else { s };
            }
            return;
        }
        self.interp(p, Some(g));
    }
}

/// `lim_{y→0} |y|^a ∂_y u(x, y)` from samples on rows `y = 0, h, 2h, 3h`,
/// fitted to the local expansion `e0 + e1 y² + (v0 + v1 y²) y^{1-a}` of an
/// `L_a`-harmonic function. The result is `(1 - a) v0`.
pub fn conormal_derivative(u: &dyn Field, x: &[f64], a: f64, h: f64) -> f64 {
    let mut p = x.to_vec();
    p.push(0.0);
    let n = x.len();
    let mut m = nalgebra::Matrix4::zeros();
    let mut b = nalgebra::Vector4::zeros();
    for k in 0..4 {
        let y = k as f64 * h;
        p[n] = y;
        b[k] = u.value(&p);
        let t = if k == 0 { 0.0 } else { y.powf(1.0 - a) };
        m[(k, 0)] = 1.0;
        m[(k, 1)] = y * y;
        m[(k, 2)] = t;
        m[(k, 3)] = t * y * y;
    }
    match m.lu().solve(&b) {
        Some(c) => (1.0 - a) * c[2],
        None => f64::NAN,
    }
}

impl GridField {
    /// Conormal derivative on `Σ` at `x` using the grid spacing.
    pub fn conormal_derivative(&self, x: &[f64]) -> f64 {
        conormal_derivative(self, x, self.a, self.domain.hy())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_ratio, planar_even, ratio_to_f64};

    fn opts() -> SolverOptions {
        SolverOptions { tol: 1e-12, ..Default::default() }
    }

    #[test]
    fn constants_and_linear_data_are_reproduced() {
        for a in [-0.5, 0.0, 0.5] {
            let w = WeightParam::new(1, a).unwrap();
            let dom = GridDomain::square(1, 1.0, 2.0, 33).unwrap();
            let (f, rep) = solve_extension(&|_| 1.0, GridParity::Symmetric, &w, &dom, &opts()).unwrap();
            assert!(f.values.iter().all(|v| (v - 1.0).abs() < 1e-10), "{rep:?}");
            let (f, _) = solve_extension(&|p| p[0], GridParity::Symmetric, &w, &dom, &opts()).unwrap();
            for (i, v) in f.values.iter().enumerate() {
                assert!((v - dom.coords(i)[0]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn quadratic_is_exact_and_quartic_converges() {
        for s in ["-1/2", "0", "1/2"] {
            let aq = parse_ratio(s).unwrap();
            let a = ratio_to_f64(&aq);
            let w = WeightParam::new(1, a).unwrap();
            let p2 = planar_even(2, &aq).unwrap().to_float(a);
            let p4 = planar_even(4, &aq).unwrap().to_float(a);
            let dom = GridDomain::square(1, 1.0, 2.0, 17).unwrap();
            let (f, _) = solve_extension(&|p| p2.value(p), GridParity::Symmetric, &w, &dom, &opts()).unwrap();
            let err = (0..dom.len()).map(|i| (f.values[i] - p2.value(&dom.coords(i))).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "a={s}: {err}");
            let exact = |p: &[f64]| p4.value(p) + p2.value(p);
            let mut errs = Vec::new();
            for nx in [17, 33, 65] {
                let dom = GridDomain::square(1, 1.0, 2.0, nx).unwrap();
                let (f, _) = solve_extension(&exact, GridParity::Symmetric, &w, &dom, &opts()).unwrap();
                let e = (0..dom.len()).map(|i| (f.values[i] - exact(&dom.coords(i))).abs()).fold(0.0, f64::max);
                errs.push(e);
                assert!(max_principle(&f, 1e-12).holds);
            }
            let order = (errs[1] / errs[2]).log2();
            assert!(order > 1.9, "a={s}: {errs:?}");
        }
    }

    #[test]
    fn antisymmetric_power_is_exact() {
        let a = 0.3;
        let w = WeightParam::new(1, a).unwrap();
        let dom = GridDomain::square(1, 1.0, 2.0, 17).unwrap();
        let exact = |p: &[f64]| p[0] * p[1].powf(1.0 - a) + 2.0 * p[1].powf(1.0 - a);
        let (f, _) = solve_extension(&exact, GridParity::Antisymmetric, &w, &dom, &opts()).unwrap();
        let err = (0..dom.len()).map(|i| (f.values[i] - exact(&dom.coords(i))).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        // conormal of y|y|^{-a} is 1 - a
        let g = GridField::sample(&dom, &|p| p[1].powf(1.0 - a), GridParity::Antisymmetric, a);
        assert!((g.conormal_derivative(&[0.2]) - (1.0 - a)).abs() < 1e-12);
    }

    #[test]
    fn two_dimensional_solve() {
        let a = 0.25;
        let w = WeightParam::new(2, a).unwrap();
        let dom = GridDomain::square(2, 1.0, 1.0, 17).unwrap();
        let (f, rep) = solve_extension(&|p| p[0] * p[1], GridParity::Symmetric, &w, &dom, &opts()).unwrap();
        assert!(rep.residual <= 1e-12);
        for (i, v) in f.values.iter().enumerate() {
            let c = dom.coords(i);
            assert!((v - c[0] * c[1]).abs() < 1e-10);
        }
        assert!((f.value(&[0.13, -0.31, 0.2]) - 0.13 * -0.31).abs() < 1e-10);
    }

    #[test]
    fn interpolation_and_reflection() {
        let a = -0.5;
        let aq = parse_ratio("-1/2").unwrap();
        let p4 = planar_even(4, &aq).unwrap().to_float(a);
        let dom = GridDomain::square(1, 1.0, 2.0, 129).unwrap();
        let g = GridField::sample(&dom, &|p| p4.value(p), GridParity::Symmetric, a);
        for pt in [[0.1234, 0.0567], [-0.3, -0.2], [0.77, 1.3]] {
            assert!((g.value(&pt) - p4.value(&pt)).abs() < 1e-8);
            let (mut d1, mut d2) = ([0.0; 2], [0.0; 2]);
            g.gradient(&pt, &mut d1);
            p4.gradient(&pt, &mut d2);
            assert!((d1[0] - d2[0]).abs() < 1e-5 && (d1[1] - d2[1]).abs() < 1e-5, "{d1:?} {d2:?}");
        }
        // symmetric conormal vanishes
        assert!(g.conormal_derivative(&[0.3]).abs() < 1e-4, "{}", g.conormal_derivative(&[0.3]));
        assert!(residual_norm(&g) > 0.0);
    }

    #[test]
    fn non_convergence_is_reported() {
        let w = WeightParam::new(1, 0.0).unwrap();
        let dom = GridDomain::square(1, 1.0, 2.0, 33).unwrap();
        let o = SolverOptions { tol: 1e-14, max_iter: 3, ..Default::default() };
        match solve_extension(&|p| p[0] * p[0], GridParity::Symmetric, &w, &dom, &o) {
            Err(Error::NoConvergence { iterations, .. }) => assert_eq!(iterations, 3),
            other => panic!("{other:?}"),
        }
    }
}
