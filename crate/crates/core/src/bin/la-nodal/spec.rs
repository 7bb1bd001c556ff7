//! Text forms of fields, boundary data, radius ladders and point lists.
//!
//! Fields are sums of terms `[c*]kind:args`:
//! `poly:even:K`, `poly:odd:K`, `poly:planar:K` (planar families),
//! `anti:K` (`v·y|y|^{-a}` with `v` the planar solution of degree `K` for `2 - a`),
//! `ext:i,j,...` (extension of the monomial `x^α` on `Σ`),
//! and `corpus:NAME` on its own.

use la_nodal::corpus::build_corpus;
use la_nodal::extension::{bump, Datum};
use la_nodal::field::{ExactField, Field};
use la_nodal::monotonicity::geometric_radii;
use la_nodal::poly::{garofalo_extend, parse_ratio, planar, planar_even, planar_odd, ratio_to_f64, FloatPoly, MultiPoly, Q};
use la_nodal::sharm1d::{construct_order, SHarmonic1d};
use la_nodal::{Error, Result};
use num::One;
use std::sync::Arc;

pub fn rational(s: &str) -> Result<Q> {
    parse_ratio(s).ok_or_else(|| Error::Parse(format!("expected a rational like 1/3 or 0.25, got {s:?}")))
}

fn number(s: &str) -> Result<f64> {
    rational(s).map(|q| ratio_to_f64(&q))
}

pub fn list(s: &str) -> Result<Vec<f64>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(number).collect()
}

/// `x,y;x,y;...`
pub fn points(s: &str) -> Result<Vec<Vec<f64>>> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(list).collect()
}

/// `geometric:r_max,r_min,count` or an explicit list.
pub fn radii(s: &str) -> Result<Vec<f64>> {
    let r = match s.strip_prefix("geometric:") {
        Some(rest) => {
            let v = list(rest)?;
            if v.len() != 3 || v[2] < 1.0 || v[2].fract() != 0.0 || !(v[0] > 0.0 && v[1] > 0.0) {
                return Err(Error::Parse(format!("geometric ladder needs r_max,r_min,count, got {rest:?}")));
            }
            geometric_radii(v[0], v[1], v[2] as usize)
        }
        None => {
            let mut v = list(s)?;
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v
        }
    };
    if r.is_empty() || r.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::Parse(format!("radii must be positive, got {s:?}")));
    }
    Ok(r)
}

fn degree(s: &str) -> Result<u32> {
    s.parse().map_err(|_| Error::Parse(format!("expected a degree, got {s:?}")))
}

fn exponents(s: &str) -> Result<Vec<u32>> {
    s.split(',').map(degree).collect()
}

/// A parsed field with what is known about it.
pub struct FieldChoice {
    pub n: usize,
    pub field: Arc<dyn Field>,
    pub exact: Option<ExactField>,
    /// Grid spacing of solver-backed fields.
    pub grid_h: Option<f64>,
    pub homogeneity: Option<f64>,
}

/// One term as `(polynomial for the even part, odd factor, degree)`.
fn term(kind: &str, a: &Q) -> Result<(ExactField, f64)> {
    let af = ratio_to_f64(a);
    let parts: Vec<&str> = kind.splitn(3, ':').collect();
    match parts.as_slice() {
        ["poly", fam, k] => {
            let k = degree(k)?;
            let p = match *fam {
                "even" => planar_even(k, a)?,
                "odd" => planar_odd(k, a)?,
                "planar" => planar(k, a)?,
                other => return Err(Error::Parse(format!("unknown family {other:?} (even, odd, planar)"))),
            };
            Ok((ExactField::from_poly(&p, af), k as f64))
        }
        ["anti", k] => {
            let k = degree(k)?;
            let conj = Q::from_integer(2.into()) - a.clone();
            let v = if k == 0 { FloatPoly::new(1, vec![(vec![0, 0], 1.0)]) } else { planar(k, &conj)?.to_float(2.0 - af) };
            Ok((ExactField::antisymmetric(v, af), k as f64 + 1.0 - af))
        }
        ["ext", e] => {
            let mut e = exponents(e)?;
            let k: u32 = e.iter().sum();
            e.push(0);
            let p = garofalo_extend(&MultiPoly::<Q>::monomial(e, Q::one()), a)?;
            Ok((ExactField::from_poly(&p, af), k as f64))
        }
        _ => Err(Error::Parse(format!("unknown field term {kind:?}"))),
    }
}

pub fn field(spec: &str, a: &Q) -> Result<FieldChoice> {
    if let Some(name) = spec.strip_prefix("corpus:") {
        let corpus = build_corpus(a, 10)?;
        let e = corpus.into_iter().find(|e| e.name == name).ok_or_else(|| Error::Parse(format!("no corpus entry {name:?}")))?;
        let grid_h = match e.grid() {
            Some(g) => Some(g?.domain.hx()),
            None => None,
        };
        return Ok(FieldChoice { n: e.n, field: e.field()?, exact: e.exact().cloned(), grid_h, homogeneity: e.homogeneity });
    }
    let mut acc: Option<ExactField> = None;
    let mut degrees = Vec::new();
    for t in spec.split('+') {
        let t = t.trim();
        let (c, kind) = match t.split_once('*') {
            Some((c, k)) => (number(c)?, k),
            None => (1.0, t),
        };
        let (f, k) = term(kind, a)?;
        let f = f.scaled(c);
        if let Some(prev) = &acc {
            if prev.even.n() != f.even.n() {
                return Err(Error::Parse(format!("terms of {spec:?} live in different dimensions")));
            }
        }
        degrees.push(k);
        acc = Some(match acc {
            Some(prev) => prev.plus(&f),
            None => f,
        });
    }
    let f = acc.ok_or_else(|| Error::Parse("empty field".into()))?;
    let homogeneity = if degrees.iter().all(|d| (d - degrees[0]).abs() < 1e-12) { degrees.first().copied() } else { None };
    Ok(FieldChoice { n: f.even.n(), field: Arc::new(f.clone()), exact: Some(f), grid_h: None, homogeneity })
}

/// Boundary data for the extension: `bump`, `construct:K`, or a polynomial
/// field spec whose trace is used (with `a = 1 - 2s`).
pub fn datum(spec: &str, n: usize, s: &Q) -> Result<Datum> {
    let sf = ratio_to_f64(s);
    if spec == "bump" {
        return Ok(bump(n));
    }
    if let Some(k) = spec.strip_prefix("construct:") {
        if n != 1 {
            return Err(Error::InvalidArgument("constructed data live on the line (n = 1)".into()));
        }
        return Ok(SHarmonic1d::from_tail(construct_order(degree(k)?, sf)?).to_datum());
    }
    let a = Q::one() - s.clone() * Q::from_integer(2.into());
    let f = field(spec, &a)?;
    let exact = f.exact.ok_or_else(|| Error::Parse(format!("{spec:?} is not a polynomial")))?;
    if exact.odd.as_ref().is_some_and(|v| !v.terms().is_empty()) {
        return Err(Error::InvalidArgument("an antisymmetric field has zero trace".into()));
    }
    if exact.even.n() != n {
        return Err(Error::InvalidArgument(format!("{spec:?} lives on R^{}, not R^{n}", exact.even.n())));
    }
    Ok(Datum::polynomial(&exact.even))
}
