//! Nodal sets in a plane: contour extraction by marching squares, the
//! regular/singular split, length estimates by box counting and by line
//! crossings, and the comparison of length with frequency.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monotonicity::Functionals;
use crate::poly::{MultiPoly, UPoly, Q};
use crate::solver::conormal_derivative;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Rectangular sampling window `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn square(half: f64) -> Self {
        Rect { x0: -half, x1: half, y0: -half, y1: half }
    }
}

/// Values of a planar function on a uniform `(nx + 1) × (ny + 1)` node grid, row-major in `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl SampledGrid {
    pub fn from_fn(f: &(dyn Fn(f64, f64) -> f64 + Sync), rect: Rect, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 cells per side".into()));
        }
        let (hx, hy) = ((rect.x1 - rect.x0) / nx as f64, (rect.y1 - rect.y0) / ny as f64);
        let values: Vec<f64> = (0..=ny)
            .into_par_iter()
            .flat_map_iter(|j| (0..=nx).map(move |i| (i, j)))
            .map(|(i, j)| f(rect.x0 + i as f64 * hx, rect.y0 + j as f64 * hy))
            .collect();
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            let (i, j) = (k % (nx + 1), k / (nx + 1));
            return Err(Error::NonFinite(vec![rect.x0 + i as f64 * hx, rect.y0 + j as f64 * hy]));
        }
        Ok(SampledGrid { rect, nx, ny, values })
    }

    /// Samples a field of dimension 2 (`n = 1`).
    pub fn from_field(u: &dyn Field, rect: Rect, nx: usize, ny: usize) -> Result<Self> {
        if u.dim() != 2 {
            return Err(Error::InvalidArgument("planar sampling needs a field on R^2".into()));
        }
        Self::from_fn(&|x, y| u.value(&[x, y]), rect, nx, ny)
    }

    pub fn hx(&self) -> f64 {
        (self.rect.x1 - self.rect.x0) / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        (self.rect.y1 - self.rect.y0) / self.ny as f64
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.nx + 1) + i]
    }

    fn node(&self, i: usize, j: usize) -> [f64; 2] {
        [self.rect.x0 + i as f64 * self.hx(), self.rect.y0 + j as f64 * self.hy()]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub p: [f64; 2],
    pub q: [f64; 2],
}

impl Segment {
    pub fn length(&self) -> f64 {
        (self.q[0] - self.p[0]).hypot(self.q[1] - self.p[1])
    }

    /// The part inside the disk, if any.
    pub fn clip(&self, d: &Disk) -> Option<Segment> {
        let (dx, dy) = (self.q[0] - self.p[0], self.q[1] - self.p[1]);
        let (fx, fy) = (self.p[0] - d.center[0], self.p[1] - d.center[1]);
        let a = dx * dx + dy * dy;
        if a == 0.0 {
            return None;
        }
        let b = 2.0 * (fx * dx + fy * dy);
        let c = fx * fx + fy * fy - d.radius * d.radius;
        let disc = b * b - 4.0 * a * c;
        if disc <= 0.0 {
            return None;
        }
        let s = disc.sqrt();
        let t0 = ((-b - s) / (2.0 * a)).max(0.0);
        let t1 = ((-b + s) / (2.0 * a)).min(1.0);
        if t1 <= t0 {
            return None;
        }
        let at = |t: f64| [self.p[0] + t * dx, self.p[1] + t * dy];
        Some(Segment { p: at(t0), q: at(t1) })
    }
}

/// Disk `B_R(center)` in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disk {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Disk {
    pub fn unit() -> Self {
        Disk { center: [0.0, 0.0], radius: 1.0 }
    }

    pub fn half() -> Self {
        Disk { center: [0.0, 0.0], radius: 0.5 }
    }
}

/// Contour segments of `{u = 0}` on a sampled grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalSet {
    pub segments: Vec<Segment>,
    pub nx: usize,
    pub ny: usize,
    pub rect: Rect,
    /// Absolute zero tolerance used.
    pub zero_tol: f64,
    /// Nodes whose value was within the tolerance and moved to `+tol/2`.
    pub perturbed: usize,
}

impl NodalSet {
    pub fn length_in(&self, d: &Disk) -> f64 {
        self.segments.iter().filter_map(|s| s.clip(d)).map(|s| s.length()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// `x1,y1,x2,y2` lines.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x1,y1,x2,y2\n");
        for g in &self.segments {
            s += &format!("{:.16e},{:.16e},{:.16e},{:.16e}\n", g.p[0], g.p[1], g.q[0], g.q[1]);
        }
        s
    }

    /// Two-point blocks separated by blank lines, as gnuplot reads them.
    pub fn to_gnuplot(&self) -> String {
        let mut s = String::new();
        for g in &self.segments {
            s += &format!("{:.16e} {:.16e}\n{:.16e} {:.16e}\n\n", g.p[0], g.p[1], g.q[0], g.q[1]);
        }
        s
    }
}

/// Marching squares on `grid`. Nodes with `|u| <= zero_tol_rel · max|u|` are
/// set to `+tol/2` so that every contour passes strictly between nodes.
pub fn extract_nodal(grid: &SampledGrid, zero_tol_rel: f64) -> NodalSet {
    let tol = zero_tol_rel * grid.max_abs();
    let mut perturbed = 0;
    let v: Vec<f64> = grid
        .values
        .iter()
        .map(|&x| {
            if x.abs() <= tol {
                perturbed += 1;
                0.5 * tol.max(f64::MIN_POSITIVE)
            } else {
                x
            }
        })
        .collect();
    let at = |i: usize, j: usize| v[j * (grid.nx + 1) + i];
    let cross = |p: [f64; 2], q: [f64; 2], a: f64, b: f64| {
        let t = a / (a - b);
        [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
    };
    let mut segments = Vec::new();
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            // corners counterclockwise from the lower left
            let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let val: Vec<f64> = c.iter().map(|&(a, b)| at(a, b)).collect();
            let pos: Vec<[f64; 2]> = c.iter().map(|&(a, b)| grid.node(a, b)).collect();
            let mut pts = Vec::with_capacity(4);
            for e in 0..4 {
                let f = (e + 1) % 4;
                if (val[e] > 0.0) != (val[f] > 0.0) {
                    pts.push((e, cross(pos[e], pos[f], val[e], val[f])));
                }
            }
            match pts.len() {
                2 => segments.push(Segment { p: pts[0].1, q: pts[1].1 }),
                4 => {
                    // saddle: the sign of the cell mean decides which corners connect
                    let centre_pos = val.iter().sum::<f64>() > 0.0;
                    let first_pos = val[0] > 0.0;
                    if centre_pos == first_pos {
                        segments.push(Segment { p: pts[0].1, q: pts[3].1 });
                        segments.push(Segment { p: pts[1].1, q: pts[2].1 });
                    } else {
                        segments.push(Segment { p: pts[0].1, q: pts[1].1 });
                        segments.push(Segment { p: pts[2].1, q: pts[3].1 });
                    }
                }
                _ => {}
            }
        }
    }
    NodalSet { segments, nx: grid.nx, ny: grid.ny, rect: grid.rect, zero_tol: tol, perturbed }
}

/// Moves each segment endpoint onto an exact zero of `f` by bisection along
/// the grid edge it lies on; returns the refined points.
pub fn refine_on_edges(f: &dyn Fn(f64, f64) -> f64, nodal: &NodalSet) -> Vec<[f64; 2]> {
    let r = nodal.rect;
    let (hx, hy) = ((r.x1 - r.x0) / nodal.nx as f64, (r.y1 - r.y0) / nodal.ny as f64);
    let on_line = |v: f64, o: f64, h: f64| {
        let t = (v - o) / h;
        ((t - t.round()).abs() < 1e-9).then(|| t.round())
    };
    let bisect = |g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64| {
        let mut glo = g(lo);
        if glo == 0.0 {
            return lo;
        }
        if (glo > 0.0) == (g(hi) > 0.0) {
            return f64::NAN;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let gm = g(mid);
            if gm == 0.0 {
                return mid;
            }
            if (gm > 0.0) == (glo > 0.0) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut out: Vec<[f64; 2]> = Vec::new();
    for s in &nodal.segments {
        for p in [s.p, s.q] {
            let refined = if let Some(jy) = on_line(p[1], r.y0, hy) {
                let y = r.y0 + jy * hy;
                let i = ((p[0] - r.x0) / hx).floor().clamp(0.0, (nodal.nx - 1) as f64);
                let lo = r.x0 + i * hx;
                [bisect(&|x| f(x, y), lo, lo + hx), y]
            } else if let Some(ix) = on_line(p[0], r.x0, hx) {
                let x = r.x0 + ix * hx;
                let j = ((p[1] - r.y0) / hy).floor().clamp(0.0, (nodal.ny - 1) as f64);
                let lo = r.y0 + j * hy;
                [x, bisect(&|y| f(x, y), lo, lo + hy)]
            } else {
                continue;
            };
            if refined.iter().all(|v| v.is_finite()) && !out.contains(&refined) {
                out.push(refined);
            }
        }
    }
    out
}

/// Label of one nodal point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointLabel {
    pub point: [f64; 2],
    /// `sqrt(|∇_x u|² + |∂^a_y u|²)`.
    pub gradient_norm: f64,
    pub regular: bool,
}

/// `|∇_x u|² + |∂^a_y u|²` at a point of the plane `(x, y)`, with the
/// conormal derivative `lim |y|^a ∂_y u` on `Σ` taken from a one-sided fit
/// with step `h`.
pub fn regularity_indicator(u: &dyn Field, p: [f64; 2], a: f64, h: f64) -> f64 {
    let mut g = [0.0; 2];
    if p[1] == 0.0 {
        u.gradient(&p, &mut g);
        let c = conormal_derivative(u, &[p[0]], a, h);
        (g[0] * g[0] + c * c).sqrt()
    } else {
        u.gradient(&p, &mut g);
        let c = p[1].abs().powf(a) * g[1];
        (g[0] * g[0] + c * c).sqrt()
    }
}

/// Splits nodal points into regular and singular ones; the threshold is
/// `grad_tol · scale` with `scale` the sup of `|u|` on the grid divided by
/// the grid half-width.
pub fn split_regular_singular(u: &dyn Field, a: f64, points: &[[f64; 2]], scale: f64, grad_tol: f64, h: f64) -> (Vec<PointLabel>, Vec<PointLabel>) {
    let labels: Vec<PointLabel> = points
        .par_iter()
        .map(|&p| {
            let gn = regularity_indicator(u, p, a, h);
            PointLabel { point: p, gradient_norm: gn, regular: gn > grad_tol * scale }
        })
        .collect();
    labels.into_iter().partition(|l| l.regular)
}

/// Length estimate from one method.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureMethod {
    BoxCount,
    CrossingCount,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureEstimate {
    pub method: MeasureMethod,
    /// Estimate at the finest resolution.
    pub value: f64,
    /// `(resolution, estimate)`, coarse to fine; box side or line spacing.
    pub ladder: Vec<(f64, f64)>,
    pub extrapolated: f64,
    pub error: f64,
    /// Direct polyline length in the window (box count only).
    pub arclength: Option<f64>,
    /// Largest number of crossings on a single line (crossing count only).
    pub max_line_crossings: Option<usize>,
}

/// Box counting on a ladder of box sides (16, 8 and 4 grid spacings). Each
/// hit box adds `δ / (|cos θ| + |sin θ|)` with `θ` the mean direction of the
/// curve inside it, and the count is averaged over 256 shifts of the box
/// grid. The average overestimates by a term linear in `δ` (one box per
/// curve end), which first-order Richardson on the two finest levels removes.
pub fn measure_boxcount(nodal: &NodalSet, window: &Disk) -> MeasureEstimate {
    let clipped: Vec<Segment> = nodal.segments.iter().filter_map(|s| s.clip(window)).filter(|s| s.length() > 0.0).collect();
    let h = ((nodal.rect.x1 - nodal.rect.x0) / nodal.nx as f64).max((nodal.rect.y1 - nodal.rect.y0) / nodal.ny as f64);
    const SHIFTS: usize = 16;
    let mut ladder = Vec::new();
    for m in [16.0, 8.0, 4.0] {
        let delta = m * h;
        let mut sum = 0.0;
        for si in 0..SHIFTS * SHIFTS {
            let off = [
                window.center[0] + delta * (si % SHIFTS) as f64 / SHIFTS as f64,
                window.center[1] + delta * (si / SHIFTS) as f64 / SHIFTS as f64,
            ];
            let mut boxes: BTreeMap<(i64, i64), (f64, f64, f64)> = BTreeMap::new();
            for s in &clipped {
                for piece in split_at_box_lines(s, off, delta) {
                    let mid = [(piece.p[0] + piece.q[0]) / 2.0, (piece.p[1] + piece.q[1]) / 2.0];
                    let key = (((mid[0] - off[0]) / delta).floor() as i64, ((mid[1] - off[1]) / delta).floor() as i64);
                    let e = boxes.entry(key).or_insert((0.0, 0.0, 0.0));
                    e.0 += (piece.q[0] - piece.p[0]).abs();
                    e.1 += (piece.q[1] - piece.p[1]).abs();
                    e.2 += piece.length();
                }
            }
            // pieces shorter than rounding leave empty boxes behind
            sum += boxes.values().filter(|b| b.0 + b.1 > 0.0).map(|&(cx, sy, len)| delta * len / (cx + sy)).sum::<f64>();
        }
        ladder.push((delta, sum / (SHIFTS * SHIFTS) as f64));
    }
    let (fine, coarse) = (ladder[2].1, ladder[1].1);
    let extrapolated = 2.0 * fine - coarse;
    MeasureEstimate {
        method: MeasureMethod::BoxCount,
        value: fine,
        ladder,
        extrapolated,
        error: (extrapolated - fine).abs(),
        arclength: Some(clipped.iter().map(|s| s.length()).sum()),
        max_line_crossings: None,
    }
}

/// Pieces of `s` between consecutive crossings of the lines `off + mδ`.
fn split_at_box_lines(s: &Segment, off: [f64; 2], delta: f64) -> Vec<Segment> {
    let mut ts = vec![0.0, 1.0];
    for c in 0..2 {
        let (a, b) = (s.p[c], s.q[c]);
        if a == b {
            continue;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let mut m = ((lo - off[c]) / delta).ceil();
        while off[c] + m * delta < hi {
            let t = (off[c] + m * delta - a) / (b - a);
            if t > 0.0 && t < 1.0 {
                ts.push(t);
            }
            m += 1.0;
        }
    }
    ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let at = |t: f64| [s.p[0] + t * (s.q[0] - s.p[0]), s.p[1] + t * (s.q[1] - s.p[1])];
    ts.windows(2).filter(|w| w[1] > w[0]).map(|w| Segment { p: at(w[0]), q: at(w[1]) }).collect()
}

/// Crossing statistics for one resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionCount {
    pub angle: f64,
    pub crossings: usize,
    pub max_per_line: usize,
}

fn crossings_on_chord(f: &dyn Fn(f64, f64) -> f64, p: [f64; 2], dir: [f64; 2], len: f64, samples: usize, tol: f64) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for i in 0..=samples {
        let t = len * i as f64 / samples as f64;
        let v = f(p[0] + t * dir[0], p[1] + t * dir[1]);
        if v.abs() <= tol {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// Line-crossing counts over `angles` equispaced directions in `[0, π)` with
/// `lines` parallel chords per direction sampled at `samples` points each.
pub fn crossing_counts(f: &(dyn Fn(f64, f64) -> f64 + Sync), window: &Disk, angles: usize, lines: usize, samples: usize, tol: f64) -> Vec<DirectionCount> {
    let r = window.radius;
    let dp = 2.0 * r / lines as f64;
    (0..angles)
        .into_par_iter()
        .map(|k| {
            let th = std::f64::consts::PI * k as f64 / angles as f64;
            let (dir, nrm) = ([th.cos(), th.sin()], [-th.sin(), th.cos()]);
            let (mut total, mut mx) = (0, 0);
            for l in 0..lines {
                let off = -r + (l as f64 + 0.5) * dp;
                let half = (r * r - off * off).max(0.0).sqrt();
                let start = [
                    window.center[0] + off * nrm[0] - half * dir[0],
                    window.center[1] + off * nrm[1] - half * dir[1],
                ];
                let c = crossings_on_chord(f, start, dir, 2.0 * half, samples, tol);
                total += c;
                mx = mx.max(c);
            }
            DirectionCount { angle: th, crossings: total, max_per_line: mx }
        })
        .collect()
}

/// Cauchy-Crofton length `½ ∫_0^π ∫ n(θ, p) dp dθ` from 64 directions at two
/// line densities; the value is the finer one.
pub fn crossing_count(f: &(dyn Fn(f64, f64) -> f64 + Sync), window: &Disk, lines: usize, samples: usize, tol: f64) -> MeasureEstimate {
    const ANGLES: usize = 64;
    let mut ladder = Vec::new();
    let mut mx = 0;
    for (l, s) in [(lines / 2, samples / 2), (lines, samples)] {
        let counts = crossing_counts(f, window, ANGLES, l, s, tol);
        let dp = 2.0 * window.radius / l as f64;
        let total: usize = counts.iter().map(|c| c.crossings).sum();
        mx = counts.iter().map(|c| c.max_per_line).max().unwrap_or(0);
        ladder.push((dp, 0.5 * std::f64::consts::PI / ANGLES as f64 * dp * total as f64));
    }
    let (coarse, fine) = (ladder[0].1, ladder[1].1);
    MeasureEstimate {
        method: MeasureMethod::CrossingCount,
        value: fine,
        ladder,
        extrapolated: fine,
        error: (fine - coarse).abs(),
        arclength: None,
        max_line_crossings: Some(mx),
    }
}

/// Length in the window next to the frequency at radius 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureFrequency {
    pub measure: f64,
    pub crossing_measure: f64,
    pub frequency: f64,
    pub ratio: f64,
}

/// Box-count length of `{u = 0} ∩ window` and `N(X0, u, 1)`.
pub fn measure_vs_frequency(fun: &Functionals, u: &dyn Field, x0: &[f64], window: &Disk, cells: usize) -> Result<MeasureFrequency> {
    let rect = Rect {
        x0: window.center[0] - window.radius,
        x1: window.center[0] + window.radius,
        y0: window.center[1] - window.radius,
        y1: window.center[1] + window.radius,
    };
    let grid = SampledGrid::from_field(u, rect, cells, cells)?;
    let tol_rel = 1e-12;
    let measure = measure_boxcount(&extract_nodal(&grid, tol_rel), window).extrapolated;
    let tol = tol_rel * grid.max_abs();
    let crossing_measure = crossing_count(&|x, y| u.value(&[x, y]), window, 256, 1024, tol).value;
    let frequency = fun.sample(u, x0, 1.0)?.n;
    Ok(MeasureFrequency { measure, crossing_measure, frequency, ratio: measure / frequency })
}

/// Least-squares line through `(N, measure)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearGrowth {
    pub slope: f64,
    pub intercept: f64,
    /// `max |m - fit| / m`.
    pub max_relative_deviation: f64,
    pub linear: bool,
}

pub fn linear_growth(pairs: &[(f64, f64)], max_deviation: f64) -> LinearGrowth {
    let n = pairs.len() as f64;
    let (sx, sy) = pairs.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let dev = pairs.iter().map(|p| ((p.1 - (slope * p.0 + intercept)) / p.1).abs()).fold(0.0, f64::max);
    LinearGrowth { slope, intercept, max_relative_deviation: dev, linear: slope > 0.0 && dev < max_deviation }
}

/// Number of distinct real roots of `φ(t, 1)` for a homogeneous planar
/// polynomial `φ(x, y)`; the nodal set of `φ` in `B_1` then has length
/// `2k'`, plus 2 when `φ(x, 0) ≡ 0`.
pub fn real_root_directions(phi: &MultiPoly<Q>) -> Result<(usize, bool)> {
    if phi.n() != 1 {
        return Err(Error::InvalidArgument("root directions need a planar polynomial".into()));
    }
    let deg = phi.degree().unwrap_or(0) as usize;
    let mut c = vec![Q::from_integer(0.into()); deg + 1];
    let mut on_axis = vec![Q::from_integer(0.into()); deg + 1];
    for (e, v) in phi.terms() {
        c[e[0] as usize] += v.clone();
        if e[1] == 0 {
            on_axis[e[0] as usize] += v.clone();
        }
    }
    let p = UPoly::from_coeffs(c);
    let axis = UPoly::from_coeffs(on_axis).is_zero();
    Ok((if p.is_zero() { 0 } else { p.count_real_roots() }, axis))
}

/// Outcome of the unique-continuation scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UcpReport {
    /// The field is zero to tolerance at every node.
    pub degenerate: bool,
    /// Number of 3×3 node blocks entirely within the zero tolerance.
    pub zero_patches: usize,
    pub total_patches: usize,
    /// No zero patch was found.
    pub passed: bool,
}

/// Looks for 3×3 node blocks on which `|u| <= zero_tol_rel · scale`; a
/// nonzero solution has none.
pub fn unique_continuation_probe(grid: &SampledGrid, zero_tol_rel: f64, scale: f64) -> UcpReport {
    let tol = zero_tol_rel * scale;
    let small: Vec<bool> = grid.values.iter().map(|v| v.abs() <= tol).collect();
    let at = |i: usize, j: usize| small[j * (grid.nx + 1) + i];
    let mut zero = 0;
    let mut total = 0;
    for j in 0..grid.ny - 1 {
        for i in 0..grid.nx - 1 {
            total += 1;
            if (0..3).all(|dj| (0..3).all(|di| at(i + di, j + dj))) {
                zero += 1;
            }
        }
    }
    UcpReport { degenerate: small.iter().all(|&b| b), zero_patches: zero, total_patches: total, passed: zero == 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ExactField;
    use crate::poly::{planar, planar_even, FloatPoly};
    use crate::quadrature::WeightParam;

    fn q(a: f64) -> Q {
        Q::from_float(a).unwrap()
    }

    fn lin_x() -> ExactField {
        ExactField::poly(FloatPoly::new(1, vec![(vec![1, 0], 1.0)]), 0.0)
    }

    #[test]
    fn line_and_empty_sets() {
        let g = SampledGrid::from_field(&lin_x(), Rect::square(1.0), 100, 100).unwrap();
        let ns = extract_nodal(&g, 1e-12);
        assert!((ns.length_in(&Disk::unit()) - 2.0).abs() < 1e-9);
        let m = measure_boxcount(&ns, &Disk::half());
        assert!((m.extrapolated - 1.0).abs() < 0.02, "{m:?}");
        let one = SampledGrid::from_fn(&|_, _| 1.0, Rect::square(1.0), 20, 20).unwrap();
        assert!(extract_nodal(&one, 1e-12).is_empty());
    }

    #[test]
    fn planar_even_lines() {
        let a = 0.25;
        let p = ExactField::from_poly(&planar_even(2, &q(a)).unwrap(), a);
        let g = SampledGrid::from_field(&p, Rect::square(1.0), 200, 200).unwrap();
        let ns = extract_nodal(&g, 1e-12);
        let slope = 1.0 / (1.0 + a).sqrt();
        for s in &ns.segments {
            for pt in [s.p, s.q] {
                let d = (pt[0].abs() - slope * pt[1].abs()).abs();
                assert!(d < 1e-3, "{pt:?}");
            }
        }
        let m = measure_boxcount(&ns, &Disk::unit());
        assert!((m.extrapolated - 4.0).abs() < 0.2, "{m:?}");
        assert!((m.arclength.unwrap() - 4.0).abs() < 1e-2, "{m:?}");
    }

    #[test]
    fn crossings_of_a_line() {
        let f = |x: f64, _y: f64| x;
        let c = crossing_counts(&f, &Disk::unit(), 64, 50, 200, 0.0);
        assert_eq!(c[0].crossings, 50);
        assert_eq!(c[32].crossings, 0);
        let m = crossing_count(&f, &Disk::unit(), 200, 400, 0.0);
        assert!((m.value - 2.0).abs() < 0.05 * 2.0, "{m:?}");
    }

    #[test]
    fn harmonic_lengths_and_root_bound() {
        for k in 1..=6u32 {
            let p = planar(k, &q(0.0)).unwrap();
            let u = ExactField::from_poly(&p, 0.0);
            let g = SampledGrid::from_field(&u, Rect::square(1.0), 256, 256).unwrap();
            let m = measure_boxcount(&extract_nodal(&g, 1e-12), &Disk::unit());
            assert!((m.extrapolated / (2.0 * k as f64) - 1.0).abs() < 0.05, "k={k} {m:?}");
            let c = crossing_count(&|x, y| u.value(&[x, y]), &Disk::unit(), 128, 512, 1e-14);
            assert!(c.max_line_crossings.unwrap() <= k as usize);
            assert!((c.value / m.extrapolated - 1.0).abs() < 0.1, "k={k} {c:?}");
        }
    }

    #[test]
    fn root_directions() {
        let a = 0.25;
        let (k1, axis) = real_root_directions(&planar_even(2, &q(a)).unwrap()).unwrap();
        assert_eq!((k1, axis), (2, false));
        let (k1, _) = real_root_directions(&planar_even(4, &q(a)).unwrap()).unwrap();
        assert_eq!(k1, 4);
    }

    #[test]
    fn split_and_ucp() {
        let a = 0.25;
        let p = ExactField::from_poly(&planar_even(2, &q(a)).unwrap(), a);
        let s = 1.0 / (1.0 + a).sqrt();
        let pts = [[0.0, 0.0], [0.3 * s, 0.3], [-0.5 * s, 0.5]];
        let (reg, sing) = split_regular_singular(&p, a, &pts, 1.0, 1e-6, 1e-3);
        assert_eq!((reg.len(), sing.len()), (2, 1));
        assert_eq!(sing[0].point, [0.0, 0.0]);
        let odd = ExactField::antisymmetric(FloatPoly::new(1, vec![(vec![0, 0], 1.0)]), a);
        let sigma: Vec<[f64; 2]> = (0..9).map(|i| [-0.8 + 0.2 * i as f64, 0.0]).collect();
        let (reg, _) = split_regular_singular(&odd, a, &sigma, 1.0, 1e-6, 1e-3);
        assert_eq!(reg.len(), 9);
        for l in &reg {
            assert!((l.gradient_norm - (1.0 - a)).abs() < 1e-6);
        }

        let g = SampledGrid::from_field(&lin_x(), Rect::square(1.0), 100, 100).unwrap();
        assert!(unique_continuation_probe(&g, 1e-10, g.max_abs()).passed);
        let p4 = ExactField::from_poly(&planar_even(4, &q(a)).unwrap(), a);
        let g = SampledGrid::from_field(&p4, Rect::square(1.0), 100, 100).unwrap();
        assert!(unique_continuation_probe(&g, 1e-10, g.max_abs()).passed);
        let z = SampledGrid::from_fn(&|_, _| 0.0, Rect::square(1.0), 10, 10).unwrap();
        let r = unique_continuation_probe(&z, 1e-10, z.max_abs());
        assert!(r.degenerate && r.zero_patches == r.total_patches);
    }

    #[test]
    fn measure_and_frequency_of_x() {
        let f = Functionals::with_defaults(&WeightParam::new(1, 0.0).unwrap()).unwrap();
        let m = measure_vs_frequency(&f, &lin_x(), &[0.0, 0.0], &Disk::half(), 128).unwrap();
        assert!((m.measure - 1.0).abs() < 0.02 && (m.frequency - 1.0).abs() < 1e-10, "{m:?}");
    }

    #[test]
    fn refined_points_are_zeros() {
        let a = -0.5;
        let p = ExactField::from_poly(&planar_even(2, &q(a)).unwrap(), a);
        let g = SampledGrid::from_field(&p, Rect::square(1.0), 64, 64).unwrap();
        let f = |x: f64, y: f64| p.value(&[x, y]);
        let pts = refine_on_edges(&f, &extract_nodal(&g, 1e-12));
        assert!(pts.len() > 100);
        for pt in pts {
            assert!(f(pt[0], pt[1]).abs() < 1e-14);
        }
    }
}
