//! Infinite vertex-transitive lattices given by local neighbour rules.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, RootedGraph};

/// An infinite vertex-transitive lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeSpec {
    /// The hyper-simple cubic lattice `Z^d`.
    Hypercubic(usize),
    /// The hexagonal (honeycomb) lattice, coordination 3.
    Honeycomb,
    /// The Bethe lattice: the infinite `d`-regular tree.
    Bethe(usize),
}

/// A lattice site in canonical coordinates.
///
/// * `Cubic`: integer vector.
/// * `Hex`: brick-wall coordinates; the sublattice is the parity of `x + y`.
/// * `Word`: reduced word over `0..d` with no two equal consecutive letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    Cubic(Vec<i32>),
    Hex { x: i32, y: i32 },
    Word(Vec<u8>),
}

impl Site {
    /// Sublattice bit of a honeycomb site.
    pub fn parity(&self) -> Option<u8> {
        match self {
            Site::Hex { x, y } => Some((x + y).rem_euclid(2) as u8),
            _ => None,
        }
    }
}

impl LatticeSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LatticeSpec::Hypercubic(0) => invalid("hypercubic lattice needs d >= 1"),
            LatticeSpec::Bethe(d) if d < 2 => invalid("Bethe lattice needs d >= 2"),
            _ => Ok(()),
        }
    }

    /// Coordination number `D`.
    pub fn coordination(&self) -> usize {
        match *self {
            LatticeSpec::Hypercubic(d) => 2 * d,
            LatticeSpec::Honeycomb => 3,
            LatticeSpec::Bethe(d) => d,
        }
    }

    pub fn origin(&self) -> Site {
        match *self {
            LatticeSpec::Hypercubic(d) => Site::Cubic(vec![0; d]),
            LatticeSpec::Honeycomb => Site::Hex { x: 0, y: 0 },
            LatticeSpec::Bethe(_) => Site::Word(Vec::new()),
        }
    }

    /// Whether the automorphisms fixing a site act transitively on its neighbours.
    ///
    /// True for all supported lattices; walk enumeration uses it to expand a single
    /// root branch.
    pub fn root_neighbors_equivalent(&self) -> bool {
        true
    }

    pub fn is_canonical(&self, s: &Site) -> bool {
        match (self, s) {
            (LatticeSpec::Hypercubic(d), Site::Cubic(c)) => c.len() == *d,
            (LatticeSpec::Honeycomb, Site::Hex { .. }) => true,
            (LatticeSpec::Bethe(d), Site::Word(w)) => {
                w.iter().all(|&l| (l as usize) < *d) && w.windows(2).all(|p| p[0] != p[1])
            }
            _ => false,
        }
    }

    /// The `D` neighbours of a canonical site.
    pub fn neighbors(&self, s: &Site) -> Result<Vec<Site>> {
        if !self.is_canonical(s) {
            return invalid(format!("site {s:?} is not canonical for {self}"));
        }
        Ok(match (self, s) {
            (LatticeSpec::Hypercubic(d), Site::Cubic(c)) => {
                let mut out = Vec::with_capacity(2 * d);
                for i in 0..*d {
                    for delta in [1, -1] {
                        let mut n = c.clone();
                        n[i] += delta;
                        out.push(Site::Cubic(n));
                    }
                }
                out
            }
            (LatticeSpec::Honeycomb, &Site::Hex { x, y }) => {
                let vert = if (x + y).rem_euclid(2) == 0 { 1 } else { -1 };
                vec![Site::Hex { x: x + 1, y }, Site::Hex { x: x - 1, y }, Site::Hex { x, y: y + vert }]
            }
            (LatticeSpec::Bethe(d), Site::Word(w)) => {
                let mut out = Vec::with_capacity(*d);
                if let Some((_, head)) = w.split_last() {
                    out.push(Site::Word(head.to_vec()));
                }
                for l in 0..*d as u8 {
                    if w.last() != Some(&l) {
                        let mut n = w.clone();
                        n.push(l);
                        out.push(Site::Word(n));
                    }
                }
                out
            }
            _ => unreachable!("canonical check covers mismatches"),
        })
    }

    /// Induced subgraph on the sites within graph distance `r` of the origin.
    /// The origin is vertex 0; vertices are ordered by distance, then coordinates.
    pub fn ball(&self, r: usize) -> Result<RootedGraph> {
        self.validate()?;
        let origin = self.origin();
        let mut dist: HashMap<Site, usize> = HashMap::from([(origin.clone(), 0)]);
        let mut frontier = vec![origin];
        for k in 1..=r {
            let mut next = Vec::new();
            for s in &frontier {
                for t in self.neighbors(s)? {
                    if !dist.contains_key(&t) {
                        dist.insert(t.clone(), k);
                        next.push(t);
                    }
                }
            }
            frontier = next;
        }
        let mut sites: Vec<(usize, Site)> = dist.into_iter().map(|(s, d)| (d, s)).collect();
        sites.sort();
        let index: HashMap<&Site, usize> = sites.iter().enumerate().map(|(i, (_, s))| (s, i)).collect();
        let mut edges = Vec::new();
        for (i, (_, s)) in sites.iter().enumerate() {
            for t in self.neighbors(s)? {
                if let Some(&j) = index.get(&t) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        Ok(RootedGraph { graph: Graph::new(sites.len(), edges)?, root: 0 })
    }

    /// Short name used on the command line: `z2`, `hex`, `bethe:4`.
    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSpec::Hypercubic(d) => write!(f, "z{d}"),
            LatticeSpec::Honeycomb => write!(f, "hex"),
            LatticeSpec::Bethe(d) => write!(f, "bethe:{d}"),
        }
    }
}

impl FromStr for LatticeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let spec = if s == "hex" || s == "honeycomb" {
            LatticeSpec::Honeycomb
        } else if let Some(d) = s.strip_prefix("bethe:") {
            LatticeSpec::Bethe(d.parse().map_err(|_| Error::InvalidInput(format!("bad Bethe degree in {s:?}")))?)
        } else if let Some(d) = s.strip_prefix('z') {
            LatticeSpec::Hypercubic(d.parse().map_err(|_| Error::InvalidInput(format!("bad dimension in {s:?}")))?)
        } else {
            return invalid(format!("unknown lattice {s:?} (expected z<d>, hex or bethe:<d>)"));
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_lattice_origin_neighbors() {
        let l = LatticeSpec::Hypercubic(2);
        let mut n = l.neighbors(&l.origin()).unwrap();
        n.sort();
        let want: Vec<Site> = [[-1, 0], [0, -1], [0, 1], [1, 0]].iter().map(|c| Site::Cubic(c.to_vec())).collect();
        assert_eq!(n, want);
    }

    #[test]
    fn bethe_root_has_d_one_letter_children() {
        let l = LatticeSpec::Bethe(4);
        let n = l.neighbors(&l.origin()).unwrap();
        assert_eq!(n.len(), 4);
        assert!(n.iter().all(|s| matches!(s, Site::Word(w) if w.len() == 1)));
    }

    #[test]
    fn honeycomb_neighbors_switch_parity() {
        let l = LatticeSpec::Honeycomb;
        let o = l.origin();
        assert_eq!(o.parity(), Some(0));
        let n = l.neighbors(&o).unwrap();
        assert_eq!(n.len(), 3);
        assert!(n.iter().all(|s| s.parity() == Some(1)));
    }

    #[test]
    fn neighbor_rule_is_symmetric_with_full_coordination() {
        for l in [LatticeSpec::Hypercubic(3), LatticeSpec::Honeycomb, LatticeSpec::Bethe(3)] {
            let ball = l.ball(3).unwrap();
            // Walk the sites reachable in 3 steps and check symmetry on each.
            let mut sites = vec![l.origin()];
            for _ in 0..3 {
                let mut next = Vec::new();
                for s in &sites {
                    next.extend(l.neighbors(s).unwrap());
                }
                next.sort();
                next.dedup();
                sites = next;
            }
            for s in &sites {
                let ns = l.neighbors(s).unwrap();
                assert_eq!(ns.len(), l.coordination());
                for t in &ns {
                    assert!(l.neighbors(t).unwrap().contains(s));
                }
            }
            assert!(ball.graph.n() > 1);
        }
    }

    #[test]
    fn small_balls() {
        let b = LatticeSpec::Hypercubic(2).ball(1).unwrap();
        assert_eq!((b.graph.n(), b.graph.edge_count(), b.graph.degree(0)), (5, 4, 4));
        let t = LatticeSpec::Bethe(3).ball(2).unwrap();
        assert_eq!((t.graph.n(), t.graph.edge_count()), (10, 9));
    }

    #[test]
    fn non_canonical_sites_rejected() {
        assert!(LatticeSpec::Bethe(3).neighbors(&Site::Word(vec![1, 1])).is_err());
        assert!(LatticeSpec::Bethe(3).neighbors(&Site::Word(vec![3])).is_err());
        assert!(LatticeSpec::Hypercubic(2).neighbors(&Site::Cubic(vec![0])).is_err());
    }

    #[test]
    fn parse_and_display() {
        for s in ["z2", "z7", "hex", "bethe:4"] {
            assert_eq!(s.parse::<LatticeSpec>().unwrap().to_string(), s);
        }
        assert!("bethe:1".parse::<LatticeSpec>().is_err());
        assert!("cube".parse::<LatticeSpec>().is_err());
    }
}
