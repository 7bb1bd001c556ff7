//! Exact coefficient fields: rationals, and rational functions of a symbolic
//! weight exponent `a`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A field of exact coefficients.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_ratio(r: &BigRational) -> Self;

    fn from_int(i: i64) -> Self {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(i)))
    }

    /// Numerical value with the symbolic parameter (if any) set to `a`.
    fn to_f64_at(&self, a: f64) -> f64;
}

impl Coeff for BigRational {
    fn from_ratio(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64_at(&self, _a: f64) -> f64 {
        ratio_to_f64(self)
    }
}

/// Converts a big rational to the nearest double, also when numerator and
/// denominator overflow `f64` separately.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let shift = (n - d) - 60;
    let scaled = if shift >= 0 {
        BigRational::new(r.numer().clone(), r.denom().clone() << shift as usize)
    } else {
        BigRational::new(r.numer().clone() << (-shift) as usize, r.denom().clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// Parses "p/q", "p", or a decimal like "-0.25" into an exact rational.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let num: BigInt = digits.parse().ok()?;
        let den = num::pow(BigInt::from(10), fp.len());
        let r = BigRational::new(num, den);
        return Some(if neg { -r } else { r });
    }
    let p: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(p))
}

/// Dense univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UPoly(pub Vec<BigRational>);

impl UPoly {
    pub fn constant(c: BigRational) -> Self {
        let mut p = UPoly(vec![c]);
        p.trim();
        p
    }

    /// From coefficients, lowest degree first.
    pub fn from_coeffs(c: Vec<BigRational>) -> Self {
        let mut p = UPoly(c);
        p.trim();
        p
    }

    /// The monomial `t`.
    pub fn var() -> Self {
        UPoly(vec![BigRational::zero(), BigRational::one()])
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![BigRational::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        let mut p = UPoly(v);
        p.trim();
        p
    }

    pub fn neg(&self) -> Self {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::default();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        let mut p = UPoly(v);
        p.trim();
        p
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut p = UPoly(self.0.iter().map(|x| x * c).collect());
        p.trim();
        p
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r`.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let mut r = self.clone();
        let mut q = vec![BigRational::zero(); self.0.len().saturating_sub(dd).max(1)];
        let lead = d.lead();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead() / &lead;
            let shift = rd - dd;
            q[shift] = c.clone();
            for (i, dc) in d.0.iter().enumerate() {
                r.0[i + shift] -= &c * dc;
            }
            r.trim();
        }
        let mut q = UPoly(q);
        q.trim();
        (q, r)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        UPoly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let mut p = UPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        );
        p.trim();
        p
    }

    pub fn eval_ratio(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + ratio_to_f64(c))
    }

    /// Number of distinct real roots, by a Sturm sequence.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        // square-free part keeps distinct roots only
        let g = self.gcd(&self.derivative());
        let p = self.divrem(&g).0;
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].divrem(&seq[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        let changes = |signs: Vec<i32>| {
            let nz: Vec<i32> = signs.into_iter().filter(|&s| s != 0).collect();
            nz.windows(2).filter(|w| w[0] != w[1]).count()
        };
        // sign at -inf and +inf from leading coefficients
        let at_pos: Vec<i32> = seq.iter().map(|q| sign(&q.lead())).collect();
        let at_neg: Vec<i32> = seq
            .iter()
            .map(|q| {
                let s = sign(&q.lead());
                if q.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        changes(at_neg) - changes(at_pos)
    }
}

fn sign(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*a")?,
                _ => write!(f, "({c})*a^{i}")?,
            }
        }
        Ok(())
    }
}

/// Reduced rational function `num/den` in the symbolic exponent `a`; the
/// denominator is monic and coprime to the numerator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFn {
    num: UPoly,
    den: UPoly,
}

impl RatFn {
    /// The symbolic parameter `a` itself.
    pub fn var() -> Self {
        RatFn { num: UPoly::var(), den: UPoly::constant(BigRational::one()) }
    }

    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn { num, den: UPoly::constant(BigRational::one()) };
        }
        let g = num.gcd(&den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let l = d.lead();
        RatFn { num: n.scale(&(BigRational::one() / &l)), den: d.monic() }
    }

    pub fn numer(&self) -> &UPoly {
        &self.num
    }

    pub fn denom(&self) -> &UPoly {
        &self.den
    }

    /// Exact value at a rational `a`, `None` at a pole.
    pub fn eval_ratio(&self, a: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_ratio(a);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_ratio(a) / d)
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Zero for RatFn {
    fn zero() -> Self {
        RatFn { num: UPoly::default(), den: UPoly::constant(BigRational::one()) }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFn {
    fn one() -> Self {
        RatFn::from_ratio(&BigRational::one())
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den }
    }
}

impl Add for RatFn {
    type Output = RatFn;
    fn add(self, o: RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::new(self.num.add(&o.num), self.den);
        }
        RatFn::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
}

impl Sub for RatFn {
    type Output = RatFn;
    fn sub(self, o: RatFn) -> RatFn {
        self + (-o)
    }
}

impl Mul for RatFn {
    type Output = RatFn;
    fn mul(self, o: RatFn) -> RatFn {
        RatFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Div for RatFn {
    type Output = RatFn;
    fn div(self, o: RatFn) -> RatFn {
        assert!(!o.is_zero(), "division by zero rational function");
        RatFn::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
}

impl Coeff for RatFn {
    fn from_ratio(r: &BigRational) -> Self {
        RatFn { num: UPoly::constant(r.clone()), den: UPoly::constant(BigRational::one()) }
    }

    fn to_f64_at(&self, a: f64) -> f64 {
        self.num.eval_f64(a) / self.den.eval_f64(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_ratio(s).unwrap()
    }

    #[test]
    fn parse_forms() {
        assert_eq!(q("1/3"), BigRational::new(1.into(), 3.into()));
        assert_eq!(q("-0.25"), BigRational::new((-1).into(), 4.into()));
        assert_eq!(q("7"), BigRational::from_integer(7.into()));
        assert!(parse_ratio("1/0").is_none());
    }

    #[test]
    fn ratfn_arithmetic_reduces() {
        let a = RatFn::var();
        let one = RatFn::one();
        // (a+1)/(a+1) = 1
        let x = (a.clone() + one.clone()) / (a.clone() + one.clone());
        assert_eq!(x, one);
        // 1/(1+a) - 1/(1+a) = 0
        let y = one.clone() / (one.clone() + a.clone());
        assert!((y.clone() - y.clone()).is_zero());
        // evaluation at a = 1/2
        assert_eq!(y.eval_ratio(&q("1/2")), Some(q("2/3")));
        assert!(y.eval_ratio(&q("-1")).is_none());
    }

    #[test]
    fn sturm_counts_distinct_roots() {
        // (t-1)^2 (t+2) (t^2+1)
        let t = UPoly::var();
        let one = UPoly::constant(BigRational::one());
        let two = UPoly::constant(q("2"));
        let p = t.sub(&one).mul(&t.sub(&one)).mul(&t.add(&two)).mul(&t.mul(&t).add(&one));
        assert_eq!(p.count_real_roots(), 2);
        assert_eq!(t.mul(&t).sub(&UPoly::constant(q("1/3"))).count_real_roots(), 2);
    }

    #[test]
    fn huge_ratio_to_f64() {
        let big = num::pow(BigInt::from(10), 400);
        let r = BigRational::new(big.clone() * BigInt::from(3), big);
        assert!((ratio_to_f64(&r) - 3.0).abs() < 1e-15);
    }
}
