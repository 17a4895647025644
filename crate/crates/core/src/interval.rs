//! Interval arithmetic on MPFR floats with outward rounding, and certified values.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{NegAssign, Pow};
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 256;

/// Closed interval `[lo, hi]` whose endpoints are rounded outward.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

impl Interval {
    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Interval { lo: down(prec, q), hi: up(prec, q) }
    }

    pub fn from_integer(z: &Integer, prec: u32) -> Self {
        Interval { lo: down(prec, z), hi: up(prec, z) }
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        let p = prec.max(53);
        Interval { lo: Float::with_val(p, x), hi: Float::with_val(p, x) }
    }

    pub fn zero(prec: u32) -> Self {
        Interval { lo: Float::new(prec), hi: Float::new(prec) }
    }

    pub fn point(x: Float) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    /// Hull of two values given in any order.
    pub fn hull(a: Float, b: Float) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec();
        Interval { lo: down(p, &self.lo + &o.lo), hi: up(p, &self.hi + &o.hi) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec();
        Interval { lo: down(p, &self.lo - &o.hi), hi: up(p, &self.hi - &o.lo) }
    }

    pub fn neg(&self) -> Self {
        let mut lo = self.hi.clone();
        let mut hi = self.lo.clone();
        lo.neg_assign();
        hi.neg_assign();
        Interval { lo, hi }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec();
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs.iter().map(|(a, b)| down(p, *a * *b)).min_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
        let hi = pairs.iter().map(|(a, b)| up(p, *a * *b)).max_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
        Interval { lo, hi }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.lo.cmp0() != Some(Ordering::Greater) && o.hi.cmp0() != Some(Ordering::Less) {
            return Err(Error::Numerical("interval division by an interval containing 0".into()));
        }
        let p = self.prec();
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs.iter().map(|(a, b)| down(p, *a / *b)).min_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
        let hi = pairs.iter().map(|(a, b)| up(p, *a / *b)).max_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
        Ok(Interval { lo, hi })
    }

    /// Multiplication by an exact nonnegative scalar.
    pub fn scale(&self, c: &Rational) -> Self {
        self.mul(&Interval::from_rational(c, self.prec()))
    }

    pub fn ln(&self) -> Result<Self> {
        if self.lo.cmp0() != Some(Ordering::Greater) {
            return Err(Error::Numerical("logarithm of a nonpositive interval".into()));
        }
        let p = self.prec();
        Ok(Interval { lo: down(p, self.lo.ln_ref()), hi: up(p, self.hi.ln_ref()) })
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.cmp0() == Some(Ordering::Less) {
            return Err(Error::Numerical("square root of a negative interval".into()));
        }
        let p = self.prec();
        Ok(Interval { lo: down(p, self.lo.sqrt_ref()), hi: up(p, self.hi.sqrt_ref()) })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Interval::from_f64(1.0, self.prec());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Float {
        let a = Float::with_val(self.prec(), self.lo.abs_ref());
        let b = Float::with_val(self.prec(), self.hi.abs_ref());
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn mid(&self) -> Float {
        Float::with_val(self.prec(), &self.lo + &self.hi) / 2u32
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// `[value - eps, value + eps] ⊇ self` with `value` the nearest f64 to the midpoint.
    pub fn to_certified(&self, provenance: impl Into<String>) -> CertifiedValue {
        let value = self.mid().to_f64();
        let v = Float::with_val(self.prec(), value);
        let e1 = up(self.prec(), &self.hi - &v);
        let e2 = up(self.prec(), &v - &self.lo);
        let e = if e1 > e2 { e1 } else { e2 };
        CertifiedValue { value, eps: f64_up(&e), provenance: provenance.into(), exact: None }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64_round(Round::Down), self.hi.to_f64_round(Round::Up))
    }
}

/// Smallest f64 not below `x`.
pub fn f64_up(x: &Float) -> f64 {
    x.to_f64_round(Round::Up)
}

/// A real number known to lie in `[value - eps, value + eps]`.
#[derive(Clone, Debug, Serialize)]
pub struct CertifiedValue {
    pub value: f64,
    pub eps: f64,
    pub provenance: String,
    /// The exact value when it is rational.
    #[serde(skip)]
    pub exact: Option<Rational>,
}

impl CertifiedValue {
    pub fn exact(q: Rational, provenance: impl Into<String>) -> Self {
        let value = q.to_f64();
        let diff = Rational::from(&q - Rational::from_f64(value).unwrap()).abs();
        let eps = if diff == 0 { 0.0 } else { up(64, &diff).to_f64_round(Round::Up) };
        CertifiedValue { value, eps, provenance: provenance.into(), exact: Some(q) }
    }

    pub fn lower(&self) -> f64 {
        self.value - self.eps
    }

    pub fn upper(&self) -> f64 {
        self.value + self.eps
    }

    /// Exact test of `|x - value| <= eps`.
    pub fn contains(&self, x: f64) -> bool {
        let (Some(x), Some(v), Some(e)) =
            (Rational::from_f64(x), Rational::from_f64(self.value), Rational::from_f64(self.eps))
        else {
            return false;
        };
        Rational::from(x - v).abs() <= e
    }

    /// The enclosing interval at the given precision.
    pub fn interval(&self, prec: u32) -> Interval {
        if let Some(q) = &self.exact {
            return Interval::from_rational(q, prec);
        }
        let v = Float::with_val(prec.max(53), self.value);
        let e = Float::with_val(prec.max(53), self.eps);
        Interval { lo: down(prec.max(53), &v - &e), hi: up(prec.max(53), &v + &e) }
    }
}

impl fmt::Display for CertifiedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self.value, self.eps)
    }
}

/// Parses `"0.638"`, `"1e-4"`, `"-2.5E3"`, `"3/2"` or an integer exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a number: {s:?}"));
    if s.contains('/') {
        return s.parse::<Rational>().map_err(|_| bad());
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac) = match mant.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mant, ""),
    };
    if (int_part.is_empty() && frac.is_empty()) || !int_part.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: Integer = format!("0{int_part}{frac}").parse::<Integer>().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = Integer::from(10);
    let mut q = if scale >= 0 {
        Rational::from(digits * ten.pow(scale as u32))
    } else {
        Rational::from((digits, ten.pow((-scale) as u32)))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln2_enclosed() {
        let two = Interval::from_f64(2.0, 128);
        let l = two.ln().unwrap();
        let exact = std::f64::consts::LN_2;
        assert!(l.lo().to_f64() <= exact && exact <= l.hi().to_f64());
        assert!(l.width().to_f64() < 1e-35);
    }

    #[test]
    fn thirds_stay_enclosed() {
        let third = Interval::from_rational(&Rational::from((1, 3)), 64);
        let sum = third.add(&third).add(&third);
        assert!(sum.contains(&Float::with_val(64, 1)));
        let prod = third.mul(&Interval::from_f64(-3.0, 64));
        assert!(prod.contains(&Float::with_val(64, -1)));
        assert!(Interval::from_f64(1.0, 64).div(&Interval::zero(64)).is_err());
    }

    #[test]
    fn certified_containment() {
        let c = CertifiedValue { value: 1.0, eps: 0.25, provenance: String::new(), exact: None };
        assert!(c.contains(1.25) && c.contains(0.75) && !c.contains(1.2500001));
        let q = CertifiedValue::exact(Rational::from((1, 3)), "third");
        assert!(q.eps > 0.0 && q.eps < 1e-16);
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_rational("0.638123105").unwrap(), Rational::from((638123105, 1_000_000_000)));
        assert_eq!(parse_rational("1e-4").unwrap(), Rational::from((1, 10000)));
        assert_eq!(parse_rational("-2.5E1").unwrap(), Rational::from(-25));
        assert_eq!(parse_rational("3/2").unwrap(), Rational::from((3, 2)));
        assert_eq!(parse_rational("7").unwrap(), Rational::from(7));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }
}
