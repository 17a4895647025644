//! Matching counts of arbitrary graphs by deletion recursion with memoization.

use dashmap::DashMap;
use rayon::prelude::*;
use rug::Integer;

use super::MatchingPolynomial;
use crate::canon::{is_isomorphic, wl_hash};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::IntPoly;

#[derive(Clone, Debug)]
pub struct CountConfig {
    /// Maximum number of memoized subproblems before giving up.
    pub memo_limit: usize,
    /// Connected pieces with at most this many vertices are also cached up to
    /// isomorphism (colour-refinement hash plus exact check). 0 disables.
    pub canonical_limit: usize,
    /// Pieces at least this large evaluate their branches in parallel.
    pub parallel_threshold: usize,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { memo_limit: 4_000_000, canonical_limit: 12, parallel_threshold: 28 }
    }
}

type Bits = Vec<u64>;

struct Engine<'a> {
    g: &'a Graph,
    cfg: &'a CountConfig,
    memo: DashMap<Bits, IntPoly>,
    canon: DashMap<u64, Vec<(Graph, IntPoly)>>,
}

fn has(b: &[u64], v: usize) -> bool {
    b[v >> 6] >> (v & 63) & 1 == 1
}

fn clear(b: &mut [u64], v: usize) {
    b[v >> 6] &= !(1u64 << (v & 63));
}

fn set(b: &mut [u64], v: usize) {
    b[v >> 6] |= 1u64 << (v & 63);
}

fn members(b: &[u64]) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            (x != 0).then(|| {
                let i = x.trailing_zeros() as usize;
                x &= x - 1;
                (w << 6) | i
            })
        })
    })
}

impl Engine<'_> {
    fn count(&self, s: &Bits) -> Result<IntPoly> {
        let comps = self.components(s);
        let mut acc = IntPoly::one();
        for c in comps {
            acc = acc.mul(&self.count_connected(&c)?);
        }
        Ok(acc)
    }

    fn components(&self, s: &Bits) -> Vec<Bits> {
        let mut left = s.clone();
        let mut out = Vec::new();
        loop {
            let Some(start) = members(&left).next() else { break };
            let mut comp = vec![0u64; s.len()];
            let mut stack = vec![start];
            clear(&mut left, start);
            set(&mut comp, start);
            while let Some(v) = stack.pop() {
                for &w in self.g.neighbors(v) {
                    if has(&left, w) {
                        clear(&mut left, w);
                        set(&mut comp, w);
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    fn count_connected(&self, s: &Bits) -> Result<IntPoly> {
        let size: usize = s.iter().map(|w| w.count_ones() as usize).sum();
        match size {
            0 | 1 => return Ok(IntPoly::one()),
            2 => return Ok(IntPoly::from_i64(&[1, 1])),
            _ => {}
        }
        if let Some(p) = self.memo.get(s) {
            return Ok(p.clone());
        }
        let piece = (size <= self.cfg.canonical_limit).then(|| {
            let vs: Vec<usize> = members(s).collect();
            let sub = self.g.induced(&vs);
            (wl_hash(&sub), sub)
        });
        if let Some((h, sub)) = &piece {
            if let Some(bucket) = self.canon.get(h) {
                if let Some((_, p)) = bucket.iter().find(|(g2, _)| is_isomorphic(g2, sub)) {
                    return Ok(p.clone());
                }
            }
        }

        // Branch on the highest-degree vertex v: either v is unmatched, or it is
        // matched to one of its neighbours u.
        let deg = |v: usize| self.g.neighbors(v).iter().filter(|&&w| has(s, w)).count();
        let v = members(s).max_by_key(|&v| (deg(v), std::cmp::Reverse(v))).unwrap();
        let mut rest = s.clone();
        clear(&mut rest, v);
        let mut branches = vec![rest.clone()];
        for &u in self.g.neighbors(v) {
            if has(s, u) {
                let mut b = rest.clone();
                clear(&mut b, u);
                branches.push(b);
            }
        }
        let parts: Vec<IntPoly> = if size >= self.cfg.parallel_threshold {
            branches.par_iter().map(|b| self.count(b)).collect::<Result<_>>()?
        } else {
            branches.iter().map(|b| self.count(b)).collect::<Result<_>>()?
        };
        let mut out = parts[0].clone();
        let one = Integer::from(1);
        for p in &parts[1..] {
            out.add_scaled_shifted(p, &one, 1);
        }

        if self.memo.len() >= self.cfg.memo_limit {
            return Err(Error::ResourceLimit(format!("matching memo exceeded {} entries", self.cfg.memo_limit)));
        }
        self.memo.insert(s.clone(), out.clone());
        if let Some((h, sub)) = piece {
            self.canon.entry(h).or_default().push((sub, out.clone()));
        }
        Ok(out)
    }
}

/// Exact matching counts with default limits.
pub fn matching_counts(g: &Graph) -> Result<MatchingPolynomial> {
    matching_counts_with(g, &CountConfig::default())
}

pub fn matching_counts_with(g: &Graph, cfg: &CountConfig) -> Result<MatchingPolynomial> {
    let mut all = vec![0u64; g.n().div_ceil(64).max(1)];
    for v in 0..g.n() {
        set(&mut all, v);
    }
    let e = Engine { g, cfg, memo: DashMap::new(), canon: DashMap::new() };
    let p = e.count(&all)?;
    Ok(MatchingPolynomial::from_poly(g.n(), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_box, complete, cycle, path, petersen, pyramid};

    fn counts(g: &Graph) -> Vec<u64> {
        matching_counts(g).unwrap().counts().iter().map(|c| c.to_u64().unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(counts(&complete(2)), vec![1, 1]);
        assert_eq!(counts(&path(3)), vec![1, 2]);
        assert_eq!(counts(&pyramid()), vec![1, 8, 10]);
        assert_eq!(counts(&cycle(4).unwrap()), vec![1, 4, 2]);
        assert_eq!(counts(&Graph::empty(3)), vec![1]);
        // Perfect matchings of K_6: 5!! = 15; of Petersen: 6.
        assert_eq!(*counts(&complete(6)).last().unwrap(), 15);
        assert_eq!(*counts(&petersen()).last().unwrap(), 6);
    }

    #[test]
    fn configurations_agree() {
        let g = build_box(2, &[4, 5], false).unwrap();
        let a = matching_counts(&g).unwrap();
        for cfg in [
            CountConfig { canonical_limit: 0, ..Default::default() },
            CountConfig { parallel_threshold: 2, ..Default::default() },
            CountConfig { canonical_limit: 20, ..Default::default() },
        ] {
            assert_eq!(matching_counts_with(&g, &cfg).unwrap(), a);
        }
        // Domino tilings of the 4x5 board: 95.
        assert_eq!(a.counts().last().unwrap().to_u64(), Some(95));
    }

    #[test]
    fn memo_limit_is_enforced() {
        let g = build_box(2, &[5, 5], false).unwrap();
        let cfg = CountConfig { memo_limit: 10, canonical_limit: 0, ..Default::default() };
        assert!(matches!(matching_counts_with(&g, &cfg), Err(Error::ResourceLimit(_))));
    }
}
