//! Transfer matrices for `C_m x P_n` and `C_m x C_n`.
//!
//! Columns are copies of the `m`-cycle. The state between two columns is the set of
//! cycle positions matched by a dimer crossing from the previous column.

use rug::Integer;

use super::MatchingPolynomial;
use crate::error::{Error, Result};
use crate::poly::IntPoly;

pub const MAX_STRIP_WIDTH: usize = 16;
pub const MAX_TORUS_WIDTH: usize = 8;

struct Transfer {
    m: usize,
    full: usize,
}

impl Transfer {
    fn new(m: usize) -> Self {
        Transfer { m, full: (1 << m) - 1 }
    }

    /// Places intra-column dimers: entry `O` of the result collects weight from
    /// states whose occupied set grows to `O` by adding disjoint cycle edges.
    fn intra(&self, v: &mut [IntPoly]) {
        let one = Integer::from(1);
        for i in 0..self.m {
            let e = (1usize << i) | (1 << ((i + 1) % self.m));
            for o in 0..=self.full {
                if o & e == e && !v[o ^ e].is_zero() {
                    let src = v[o ^ e].clone();
                    v[o].add_scaled_shifted(&src, &one, 1);
                }
            }
        }
    }

    /// Subset sums `Z[X] = sum_{O ⊆ X} U[O]`.
    fn zeta(&self, u: &mut [IntPoly]) {
        for i in 0..self.m {
            let b = 1usize << i;
            for x in 0..=self.full {
                if x & b != 0 && !u[x ^ b].is_zero() {
                    let src = u[x ^ b].clone();
                    u[x] = u[x].add(&src);
                }
            }
        }
    }

    /// One full column: intra dimers, then any subset of the still-free vertices
    /// sends a dimer forward.
    fn step(&self, mut v: Vec<IntPoly>) -> Vec<IntPoly> {
        self.intra(&mut v);
        self.zeta(&mut v);
        let one = Integer::from(1);
        (0..=self.full)
            .map(|s| {
                let mut p = IntPoly::zero();
                p.add_scaled_shifted(&v[self.full ^ s], &one, s.count_ones() as usize);
                p
            })
            .collect()
    }

    /// Last column of a strip: no forward dimers.
    fn close(&self, mut v: Vec<IntPoly>) -> IntPoly {
        self.intra(&mut v);
        v.into_iter().fold(IntPoly::zero(), |acc, p| acc.add(&p))
    }
}

/// Matching counts of the cylinder `C_m x P_n`.
pub fn strip_matching_counts(m: usize, n: usize) -> Result<MatchingPolynomial> {
    if m < 3 || n < 1 {
        return Err(Error::InvalidInput("strip needs width >= 3 and length >= 1".into()));
    }
    if m > MAX_STRIP_WIDTH {
        return Err(Error::ResourceLimit(format!("strip width {m} exceeds {MAX_STRIP_WIDTH}")));
    }
    let tr = Transfer::new(m);
    let mut v = vec![IntPoly::zero(); tr.full + 1];
    v[0] = IntPoly::one();
    for _ in 1..n {
        v = tr.step(v);
    }
    Ok(MatchingPolynomial::from_poly(m * n, tr.close(v)))
}

/// Matching counts of the torus `C_m x C_n` (`m <= 8`, `n >= 3`).
pub fn torus_matching_counts(m: usize, n: usize) -> Result<MatchingPolynomial> {
    if m < 3 || n < 3 {
        return Err(Error::InvalidInput("torus needs both sides >= 3".into()));
    }
    if m > MAX_TORUS_WIDTH {
        return Err(Error::ResourceLimit(format!("torus width {m} exceeds {MAX_TORUS_WIDTH}")));
    }
    let tr = Transfer::new(m);
    let total = (0..=tr.full)
        .map(|s0| {
            let mut v = vec![IntPoly::zero(); tr.full + 1];
            v[s0] = IntPoly::one();
            for _ in 0..n {
                v = tr.step(v);
            }
            v.swap_remove(s0)
        })
        .fold(IntPoly::zero(), |acc, p| acc.add(&p));
    Ok(MatchingPolynomial::from_poly(m * n, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cylinder, torus};
    use crate::matching::matching_counts;

    fn counts(p: &MatchingPolynomial) -> Vec<u64> {
        p.counts().iter().map(|c| c.to_u64().unwrap()).collect()
    }

    #[test]
    fn single_column_is_a_cycle() {
        assert_eq!(counts(&strip_matching_counts(4, 1).unwrap()), vec![1, 4, 2]);
        assert_eq!(counts(&strip_matching_counts(3, 1).unwrap()), vec![1, 3]);
        let p = strip_matching_counts(10, 2).unwrap();
        assert_eq!((p.n(), p.edge_count().to_u64().unwrap()), (20, 30));
    }

    #[test]
    fn agrees_with_recursion() {
        for m in 3..=6 {
            for n in 1..=4 {
                assert_eq!(strip_matching_counts(m, n).unwrap(), matching_counts(&cylinder(m, n).unwrap()).unwrap());
            }
        }
        for (m, n) in [(3, 3), (4, 3), (3, 5), (4, 4), (5, 3)] {
            assert_eq!(torus_matching_counts(m, n).unwrap(), matching_counts(&torus(m, n).unwrap()).unwrap());
        }
    }

    #[test]
    fn limits() {
        assert!(strip_matching_counts(2, 3).is_err());
        assert!(matches!(strip_matching_counts(17, 1), Err(Error::ResourceLimit(_))));
        assert!(torus_matching_counts(9, 3).is_err());
    }
}
