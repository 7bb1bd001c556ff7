//! JSON form of polynomials:
//! `{"header": {"n", "a", "parity"}, "terms": [{"exponents", "num", "den"}]}`.
//!
//! Rational coefficients store integer `num`/`den` (as strings once they no
//! longer fit in 64 bits). Symbolic coefficients store `num`/`den` as
//! polynomials in `a` written out as strings.

use super::coeff::{parse_ratio, RatFn};
use super::multi::MultiPoly;
use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyHeader {
    pub n: usize,
    pub a: String,
    pub parity: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub num: Value,
    pub den: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub header: PolyHeader,
    pub terms: Vec<TermRecord>,
}

fn int_value(i: &BigInt) -> Value {
    match i.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(i.to_string()),
    }
}

fn value_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("integer expected, got {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("integer expected, got {s:?}"))),
        other => Err(Error::Parse(format!("integer expected, got {other}"))),
    }
}

/// Formats a rational as `"p/q"`, or `"p"` for integers.
pub fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_json(p: &MultiPoly<BigRational>, a: &BigRational) -> PolyJson {
    PolyJson {
        header: PolyHeader { n: p.n(), a: ratio_string(a), parity: p.parity_label().into() },
        terms: p
            .terms()
            .map(|(e, c)| TermRecord { exponents: e.clone(), num: int_value(c.numer()), den: int_value(c.denom()) })
            .collect(),
    }
}

pub fn to_json_symbolic(p: &MultiPoly<RatFn>) -> PolyJson {
    PolyJson {
        header: PolyHeader { n: p.n(), a: "symbolic".into(), parity: p.parity_label().into() },
        terms: p
            .terms()
            .map(|(e, c)| TermRecord {
                exponents: e.clone(),
                num: Value::from(c.numer().to_string()),
                den: Value::from(c.denom().to_string()),
            })
            .collect(),
    }
}

/// Reads a rational polynomial and its `a`.
pub fn from_json(j: &PolyJson) -> Result<(MultiPoly<BigRational>, BigRational)> {
    let a = parse_ratio(&j.header.a).ok_or_else(|| Error::Parse(format!("a must be a rational, got {:?}", j.header.a)))?;
    let n = j.header.n;
    let mut p = MultiPoly::zero(n);
    for t in &j.terms {
        if t.exponents.len() != n + 1 {
            return Err(Error::Parse(format!("term {:?} needs {} exponents", t.exponents, n + 1)));
        }
        let den = value_int(&t.den)?;
        if den == BigInt::from(0) {
            return Err(Error::Parse("zero denominator".into()));
        }
        p.add_term(t.exponents.clone(), BigRational::new(value_int(&t.num)?, den));
    }
    Ok((p, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::families::{planar_even, planar_odd};

    #[test]
    fn roundtrip() {
        let a = parse_ratio("1/3").unwrap();
        let p = planar_even(6, &a).unwrap();
        let j = to_json(&p, &a);
        assert_eq!(j.header.parity, "even");
        let s = serde_json::to_string(&j).unwrap();
        let back: PolyJson = serde_json::from_str(&s).unwrap();
        let (q, a2) = from_json(&back).unwrap();
        assert_eq!(q, p);
        assert_eq!(a2, a);
    }

    #[test]
    fn big_integers_are_strings() {
        let a = parse_ratio("1/7").unwrap();
        let p = planar_odd(21, &a).unwrap();
        let j = to_json(&p, &a);
        assert!(j.terms.iter().any(|t| t.den.is_string()));
        assert_eq!(from_json(&j).unwrap().0, p);
    }

    #[test]
    fn symbolic_header() {
        let p = planar_even(2, &RatFn::var()).unwrap();
        let j = to_json_symbolic(&p);
        assert_eq!(j.header.a, "symbolic");
        assert!(from_json(&j).is_err());
    }
}
