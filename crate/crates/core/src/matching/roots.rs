//! Real-root isolation for matching polynomials.
//!
//! All work happens on `Q(u)` with `mu(x) = x^(n-2 nu) Q(x^2)`: its roots are
//! positive, and each one gives the pair `±sqrt(u)`. The square-free factors of `Q`
//! are isolated with Sturm sequences and refined by bisection in exact rationals.

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::{Integer, Rational};

use super::MatchingPolynomial;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// Closed interval `[lo, hi]` holding exactly one distinct root of multiplicity `mult`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub mult: usize,
}

impl RootInterval {
    pub fn midpoint(&self) -> Rational {
        Rational::from(&self.lo + &self.hi) / 2u32
    }

    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }
}

/// Roots of `mu(G, x)` as sorted, pairwise disjoint isolating intervals.
#[derive(Clone, Debug)]
pub struct RootMeasure {
    pub roots: Vec<RootInterval>,
    pub n: usize,
    pub precision: Rational,
}

impl RootMeasure {
    /// Midpoints repeated by multiplicity, in increasing order.
    pub fn points_f64(&self) -> Vec<f64> {
        self.roots.iter().flat_map(|r| std::iter::repeat(r.midpoint().to_f64()).take(r.mult)).collect()
    }

    pub fn distinct(&self) -> usize {
        self.roots.len()
    }

    /// Largest absolute value over all interval endpoints.
    pub fn max_abs(&self) -> Rational {
        self.roots.iter().map(|r| r.hi.clone().abs().max(r.lo.clone().abs())).max().unwrap_or_default()
    }
}

// ---------------------------------------------------------------------------
// Square-free decomposition and Sturm sequences

/// `Q = prod_j F_j^j` with each `F_j` square-free and primitive; returns `(j, F_j)`
/// for the nonconstant factors.
fn squarefree_factors(q: &IntPoly) -> Result<Vec<(usize, IntPoly)>> {
    // P_0 = Q, P_j = gcd(P_{j-1}, P_{j-1}'). S_j = P_{j-1}/P_j carries the roots of
    // multiplicity >= j, so F_j = S_j / S_{j+1}.
    let mut p = vec![q.primitive_part()];
    while p.last().unwrap().degree().unwrap_or(0) > 0 {
        let last = p.last().unwrap();
        p.push(last.gcd(&last.derivative()));
    }
    let div = |a: &IntPoly, b: &IntPoly| {
        a.div_exact(b).ok_or_else(|| Error::Inconsistency("inexact division in square-free decomposition".into()))
    };
    let mut s = Vec::new();
    for j in 1..p.len() {
        s.push(div(&p[j - 1], &p[j])?);
    }
    s.push(IntPoly::one());
    let mut out = Vec::new();
    for j in 0..s.len() - 1 {
        let f = div(&s[j], &s[j + 1])?.primitive_part();
        if f.degree().unwrap_or(0) > 0 {
            out.push((j + 1, f));
        }
    }
    Ok(out)
}

struct Sturm {
    chain: Vec<IntPoly>,
}

impl Sturm {
    fn new(f: &IntPoly) -> Self {
        let mut chain = vec![f.clone(), f.derivative().remove_content()];
        loop {
            let n = chain.len();
            let b = &chain[n - 1];
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            let a = &chain[n - 2];
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // prem = lc(b)^(delta+1) * rem; fix the sign so that we store -rem up to a
            // positive factor.
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let neg_scale = *b.leading().unwrap() < 0 && delta % 2 == 0;
            let r = r.remove_content();
            chain.push(if neg_scale { r } else { r.neg() });
        }
        Sturm { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut last = Ordering::Equal;
        let mut v = 0;
        for p in &self.chain {
            let s = p.sign_at_rational(x);
            if s != Ordering::Equal {
                if last != Ordering::Equal && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// A point of `(a, b)` near the middle at which `f` does not vanish.
fn split_point(f: &IntPoly, a: &Rational, b: &Rational) -> Rational {
    let w = Rational::from(b - a);
    for (num, den) in [(1u32, 2u32), (3, 7), (4, 7), (2, 5), (3, 5), (5, 11), (6, 11)] {
        let x = Rational::from(a + Rational::from(&w * Rational::from((num, den))));
        if f.sign_at_rational(&x) != Ordering::Equal {
            return x;
        }
    }
    // f has finitely many roots; keep trying distinct dyadic offsets.
    let mut k = 3u32;
    loop {
        let x = Rational::from(
            a + Rational::from(&w * Rational::from((Integer::from((1u64 << k) + 1), Integer::from(1u64 << (k + 1))))),
        );
        if f.sign_at_rational(&x) != Ordering::Equal {
            return x;
        }
        k += 1;
    }
}

/// Isolated root of a square-free factor in `u`: either exact, or in the open
/// interval `(lo, hi)` with `f(lo) f(hi) < 0`.
#[derive(Clone, Debug)]
struct UInterval {
    lo: Rational,
    hi: Rational,
    exact: bool,
    mult: usize,
    factor: usize,
}

fn isolate_factor(f: &IntPoly, idx: usize, mult: usize, upper: &Rational) -> Vec<UInterval> {
    let st = Sturm::new(f);
    let mut out = Vec::new();
    let mut stack = vec![(Rational::new(), upper.clone())];
    while let Some((a, b)) = stack.pop() {
        match st.count(&a, &b) {
            0 => {}
            1 => out.push(UInterval { lo: a, hi: b, exact: false, mult, factor: idx }),
            _ => {
                let m = split_point(f, &a, &b);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    out
}

/// Halve an isolating interval using the sign of `f`.
fn bisect(f: &IntPoly, r: &mut UInterval) {
    if r.exact {
        return;
    }
    let mid = Rational::from(&r.lo + &r.hi) / 2u32;
    let sm = f.sign_at_rational(&mid);
    if sm == Ordering::Equal {
        r.lo = mid.clone();
        r.hi = mid;
        r.exact = true;
    } else if sm == f.sign_at_rational(&r.lo) {
        r.lo = mid;
    } else {
        r.hi = mid;
    }
}

/// `[floor, ceil]` bounds on `sqrt(q)` with denominator `2^s`.
fn sqrt_bounds(lo: &Rational, hi: &Rational, s: u32) -> (Rational, Rational) {
    let scale = Integer::from(1) << (2 * s);
    let down = Integer::from((Rational::from(lo * &scale)).floor_ref()).sqrt();
    let up_arg = Integer::from(Rational::from(hi * &scale).ceil_ref());
    let mut up = up_arg.clone().sqrt();
    if Integer::from(&up * &up) < up_arg {
        up += 1;
    }
    let den = Integer::from(1) << s;
    (Rational::from((down, den.clone())), Rational::from((up, den)))
}

/// Isolates all roots of `mu(G, x)` to intervals of width below `precision`.
pub fn isolate_roots(p: &MatchingPolynomial, precision: &Rational) -> Result<RootMeasure> {
    if *precision <= 0 {
        return Err(Error::InvalidInput("precision must be positive".into()));
    }
    let q = p.reduced_poly();
    let upper = Rational::from(p.edge_count() + 1u32);
    let factors = squarefree_factors(&q)?;
    let mut us: Vec<UInterval> =
        factors.par_iter().enumerate().flat_map_iter(|(i, (mult, f))| isolate_factor(f, i, *mult, &upper)).collect();
    let found: usize = us.iter().map(|r| r.mult).sum();
    if found != p.nu() {
        return Err(Error::Inconsistency(format!(
            "found {found} positive squared roots, expected {} (polynomial not real-rooted?)",
            p.nu()
        )));
    }

    let zero_mult = p.n() - 2 * p.nu();
    let mut s = 8u32;
    loop {
        let xs: Vec<(Rational, Rational, usize)> = us
            .iter()
            .map(|r| {
                let (a, b) = sqrt_bounds(&r.lo, &r.hi, s);
                (a, b, r.mult)
            })
            .collect();
        let mut all: Vec<RootInterval> = Vec::with_capacity(2 * xs.len() + 1);
        for (a, b, m) in &xs {
            all.push(RootInterval { lo: Rational::from(-b), hi: Rational::from(-a), mult: *m });
            all.push(RootInterval { lo: a.clone(), hi: b.clone(), mult: *m });
        }
        if zero_mult > 0 {
            all.push(RootInterval { lo: Rational::new(), hi: Rational::new(), mult: zero_mult });
        }
        all.sort_by(|x, y| x.lo.cmp(&y.lo));
        let disjoint = all.windows(2).all(|w| w[0].hi < w[1].lo);
        let narrow = all.iter().all(|r| r.width() < *precision);
        if disjoint && narrow {
            return Ok(RootMeasure { roots: all, n: p.n(), precision: precision.clone() });
        }
        us.par_iter_mut().for_each(|r| {
            for _ in 0..4 {
                bisect(&factors[r.factor].1, r);
            }
        });
        s += 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(n: usize, m: &[i64]) -> MatchingPolynomial {
        MatchingPolynomial::new(n, m.iter().map(|&x| Integer::from(x)).collect()).unwrap()
    }

    #[test]
    fn k2_roots_are_exact() {
        let rm = isolate_roots(&poly(2, &[1, 1]), &Rational::from((1, 1000))).unwrap();
        assert_eq!(rm.roots.len(), 2);
        assert!(rm.roots[1].lo <= 1 && rm.roots[1].hi >= 1);
        assert!(rm.roots[0].lo <= -1 && rm.roots[0].hi >= -1);
    }

    #[test]
    fn p3_roots_within_precision() {
        let prec = Rational::from((1, 1_000_000));
        let rm = isolate_roots(&poly(3, &[1, 2]), &prec).unwrap();
        let sqrt2 = 2f64.sqrt();
        let mids = rm.points_f64();
        assert_eq!(mids.len(), 3);
        assert!((mids[0] + sqrt2).abs() < 1e-6 && mids[1] == 0.0 && (mids[2] - sqrt2).abs() < 1e-6);
        // sqrt(2) itself is bracketed.
        let r = &rm.roots[2];
        assert!(Rational::from(&r.lo * &r.lo) <= 2 && Rational::from(&r.hi * &r.hi) >= 2);
    }

    #[test]
    fn repeated_roots_get_multiplicity() {
        // Three disjoint edges: mu = (x^2 - 1)^3.
        let rm = isolate_roots(&poly(6, &[1, 3, 3, 1]), &Rational::from((1, 100))).unwrap();
        assert_eq!(rm.roots.iter().map(|r| r.mult).collect::<Vec<_>>(), vec![3, 3]);
    }

    #[test]
    fn squarefree_decomposition_reassembles() {
        let a = IntPoly::from_i64(&[-1, 1]);
        let b = IntPoly::from_i64(&[-3, 1]);
        let c = IntPoly::from_i64(&[-7, 1]);
        let q = a.mul(&b.pow(2)).mul(&c.pow(3));
        let f = squarefree_factors(&q).unwrap();
        assert_eq!(f, vec![(1, a), (2, b), (3, c)]);
    }

    #[test]
    fn sturm_counts_roots() {
        // (u-1)(u-2)(u-5)
        let f = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[-2, 1])).mul(&IntPoly::from_i64(&[-5, 1]));
        let st = Sturm::new(&f);
        let q = |x: i64| Rational::from(x);
        assert_eq!(st.count(&q(0), &q(10)), 3);
        assert_eq!(st.count(&q(0), &q(2)), 2);
        assert_eq!(st.count(&Rational::from((3, 2)), &q(4)), 1);
    }
}
