//! Matching polynomials of finite graphs and the finite matching measure.

mod counts;
mod roots;
mod strip;

pub use counts::{matching_counts, matching_counts_with, CountConfig};
pub use roots::{isolate_roots, RootInterval, RootMeasure};
pub use strip::{strip_matching_counts, torus_matching_counts, MAX_STRIP_WIDTH, MAX_TORUS_WIDTH};

use rug::{Integer, Rational};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::moments::{MomentSequence, MomentSource};
use crate::poly::IntPoly;

/// Matching counts `m_0..m_nu` of a graph on `n` vertices; `m_k` is the number of
/// `k`-matchings and `nu` the matching number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingPolynomial {
    n: usize,
    m: Vec<Integer>,
}

impl MatchingPolynomial {
    pub fn new(n: usize, m: Vec<Integer>) -> Result<Self> {
        if m.first().map_or(true, |m0| *m0 != 1) {
            return invalid("m_0 must be 1");
        }
        if m.iter().any(|c| *c <= 0) {
            return invalid("matching counts must be positive up to the matching number");
        }
        if 2 * (m.len() - 1) > n {
            return invalid(format!("{} dimers cannot fit on {n} vertices", m.len() - 1));
        }
        Ok(MatchingPolynomial { n, m })
    }

    /// From a generating polynomial `M(t)` with trailing zeros already trimmed.
    pub(crate) fn from_poly(n: usize, p: IntPoly) -> Self {
        MatchingPolynomial { n, m: p.into_coeffs() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[Integer] {
        &self.m
    }

    /// Matching number `nu`.
    pub fn nu(&self) -> usize {
        self.m.len() - 1
    }

    pub fn edge_count(&self) -> Integer {
        self.m.get(1).cloned().unwrap_or_default()
    }

    /// `M(t) = sum m_k t^k`.
    pub fn partition_poly(&self) -> IntPoly {
        IntPoly::new(self.m.clone())
    }

    /// `mu(x) = sum (-1)^k m_k x^(n-2k)`.
    pub fn mu_poly(&self) -> IntPoly {
        let mut c = vec![Integer::new(); self.n + 1];
        for (k, mk) in self.m.iter().enumerate() {
            c[self.n - 2 * k] = if k % 2 == 0 { mk.clone() } else { Integer::from(-mk) };
        }
        IntPoly::new(c)
    }

    /// The monic polynomial `Q(u) = sum (-1)^k m_k u^(nu-k)` with
    /// `mu(x) = x^(n - 2 nu) Q(x^2)`. Its roots are the squares of the nonzero roots.
    pub fn reduced_poly(&self) -> IntPoly {
        let nu = self.nu();
        let mut c = vec![Integer::new(); nu + 1];
        for (k, mk) in self.m.iter().enumerate() {
            c[nu - k] = if k % 2 == 0 { mk.clone() } else { Integer::from(-mk) };
        }
        IntPoly::new(c)
    }

    /// `gcd(mu, mu')` is constant, i.e. every root is simple.
    pub fn is_square_free(&self) -> bool {
        let mu = self.mu_poly();
        mu.gcd(&mu.derivative()).degree() == Some(0)
    }

    pub fn eval_partition(&self, t: &Rational) -> Rational {
        self.partition_poly().eval_rational(t)
    }

    /// Product of matching polynomials of disjoint graphs.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        Self::from_poly(self.n + other.n, self.partition_poly().mul(&other.partition_poly()))
    }
}

/// Exact moments `mu_0..mu_K` of the matching measure (uniform on the roots of
/// `mu(G, x)`), from Newton's identities on the coefficients.
pub fn finite_moments(p: &MatchingPolynomial, k_max: usize, degree_bound: usize) -> MomentSequence {
    // Power sums P_j of the roots u_i of Q; the m_k are their elementary symmetric
    // functions. The x-power sum of order 2j is 2 P_j.
    let e = |i: usize| p.m.get(i).cloned().unwrap_or_default();
    let mut pw: Vec<Integer> = vec![Integer::from(p.nu())];
    for j in 1..=k_max / 2 {
        let mut s = Integer::new();
        for i in 1..j {
            let term = Integer::from(&e(i) * &pw[j - i]);
            if i % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        let last = e(j) * Integer::from(j);
        if j % 2 == 1 {
            s += last;
        } else {
            s -= last;
        }
        pw.push(s);
    }
    let n = Integer::from(p.n);
    let mu = (0..=k_max)
        .map(|k| match k {
            0 => Rational::from(1),
            k if k % 2 == 1 => Rational::new(),
            k => Rational::from((Integer::from(&pw[k / 2] * 2u32), n.clone())),
        })
        .collect();
    MomentSequence::new(mu, degree_bound, MomentSource::Graph { n: p.n }).expect("mu_0 = 1")
}

/// `mu'(G, x) = sum_v mu(G - v, x)`, checked coefficient-wise.
pub fn derivative_identity_holds(g: &Graph) -> Result<bool> {
    let lhs = matching_counts(g)?.mu_poly().derivative();
    let mut rhs = IntPoly::zero();
    for v in 0..g.n() {
        rhs = rhs.add(&matching_counts(&g.remove_vertex(v))?.mu_poly());
    }
    Ok(lhs == rhs)
}

/// Power series `sum (-1)^k m_k y^(2k)`, i.e. `y^n mu(G, 1/y)`, truncated at `y^k_max`.
fn reversed_series(p: &MatchingPolynomial, k_max: usize) -> Vec<Integer> {
    let mut s = vec![Integer::new(); k_max + 1];
    for (k, mk) in p.m.iter().enumerate() {
        if 2 * k <= k_max {
            s[2 * k] = if k % 2 == 0 { mk.clone() } else { Integer::from(-mk) };
        }
    }
    s
}

/// Coefficients `0..=k_max` of `x mu(G - v, x) / mu(G, x)` as a series in `1/x`.
pub fn godsil_ratio_series(g: &Graph, v: usize, k_max: usize) -> Result<Vec<Integer>> {
    if v >= g.n() {
        return invalid(format!("vertex {v} not in graph on {} vertices", g.n()));
    }
    let a = reversed_series(&matching_counts(g)?, k_max);
    let b = reversed_series(&matching_counts(&g.remove_vertex(v))?, k_max);
    // a_0 = 1, so the quotient has integer coefficients.
    let mut q: Vec<Integer> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut c = b[k].clone();
        for i in 1..=k {
            c -= Integer::from(&a[i] * &q[k - i]);
        }
        q.push(c);
    }
    Ok(q)
}

/// Whether the ratio series agrees with the closed-walk counts at the root of the
/// tree of self-avoiding walks from `v`, through order `k_max`.
pub fn godsil_ratio_check(g: &Graph, v: usize, k_max: usize) -> Result<bool> {
    const DEPTH_LIMIT: usize = 64;
    if k_max > DEPTH_LIMIT {
        return Err(Error::OutOfRange(format!("order {k_max} exceeds limit {DEPTH_LIMIT}")));
    }
    let lhs = godsil_ratio_series(g, v, k_max)?;
    let walks = crate::saw::closed_walk_counts_graph(g, v, k_max, &crate::saw::SawConfig::default())?;
    Ok(lhs == walks.a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, petersen, pyramid};

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn polynomial_forms() {
        let p = MatchingPolynomial::new(5, ints(&[1, 8, 10])).unwrap();
        assert_eq!(p.mu_poly(), IntPoly::from_i64(&[0, 10, 0, -8, 0, 1]));
        assert_eq!(p.reduced_poly(), IntPoly::from_i64(&[10, -8, 1]));
        assert!(MatchingPolynomial::new(3, ints(&[1, 2, 1])).is_err());
        assert!(MatchingPolynomial::new(3, ints(&[2, 2])).is_err());
    }

    #[test]
    fn square_free() {
        assert!(matching_counts(&cycle(5).unwrap()).unwrap().is_square_free());
        // Two isolated vertices: x^2.
        assert!(!MatchingPolynomial::new(2, ints(&[1])).unwrap().is_square_free());
        // Disjoint copies repeat every root.
        assert!(!matching_counts(&path(3).copies(2)).unwrap().is_square_free());
    }

    #[test]
    fn newton_moments() {
        let k2 = MatchingPolynomial::new(2, ints(&[1, 1])).unwrap();
        let m = finite_moments(&k2, 8, 1);
        for k in 0..=8 {
            assert_eq!(*m.mu(k), if k % 2 == 0 { 1 } else { 0 });
        }
        let p3 = finite_moments(&MatchingPolynomial::new(3, ints(&[1, 2])).unwrap(), 4, 2);
        assert_eq!(*p3.mu(4), Rational::from((8, 3)));
        let pyr = finite_moments(&MatchingPolynomial::new(5, ints(&[1, 8, 10])).unwrap(), 2, 4);
        assert_eq!(*pyr.mu(2), Rational::from((16, 5)));
    }

    #[test]
    fn newton_moments_match_trace_of_adjacency_powers_on_a_tree() {
        // On a forest the matching polynomial is the characteristic polynomial, so the
        // moments are averaged closed-walk counts.
        let g = path(6);
        let m = finite_moments(&matching_counts(&g).unwrap(), 10, 2);
        for k in 0..=10 {
            let total: Integer = (0..6).map(|v| g.closed_walk_counts(v, k)[k].clone()).sum();
            assert_eq!(*m.mu(k), Rational::from((total, Integer::from(6))));
        }
    }

    #[test]
    fn derivative_identity_on_small_graphs() {
        for g in [pyramid(), petersen(), cycle(7).unwrap(), complete(5)] {
            assert!(derivative_identity_holds(&g).unwrap());
        }
    }

    #[test]
    fn godsil_on_named_graphs() {
        assert!(godsil_ratio_check(&complete(2), 0, 6).unwrap());
        assert!(godsil_ratio_check(&pyramid(), 0, 10).unwrap());
        assert!(godsil_ratio_check(&cycle(5).unwrap(), 2, 10).unwrap());
        // A wrong vertex deletion breaks the identity.
        let g = pyramid();
        let a = reversed_series(&matching_counts(&g).unwrap(), 6);
        let b = reversed_series(&matching_counts(&g.remove_vertex(1)).unwrap(), 6);
        assert_ne!(a, b);
    }
}
