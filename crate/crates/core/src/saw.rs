//! Closed-walk counts at the root of trees of self-avoiding walks.
//!
//! The tree is never built: a depth-first search carries the occupied sites of the
//! current walk, and each node returns the truncated series `W = 1/(1 - y S)` where
//! `y` marks a step there and back, and `S` sums the children's series.

use std::marker::PhantomData;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use rug::{Integer, Rational};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, RootedGraph};
use crate::lattice::LatticeSpec;
use crate::moments::{MomentSequence, MomentSource};

#[derive(Clone, Debug)]
pub struct SawConfig {
    /// Maximum number of expanded tree nodes.
    pub node_budget: u64,
    /// On lattices, expand one root branch and multiply by the coordination number.
    pub root_symmetry: bool,
    pub parallel: bool,
}

impl Default for SawConfig {
    fn default() -> Self {
        SawConfig { node_budget: 1_000_000_000, root_symmetry: true, parallel: true }
    }
}

/// `a_0..a_K`: closed walks of each length at the root of a tree of self-avoiding walks.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkCountTable {
    pub a: Vec<Integer>,
    pub root: String,
    pub max_order: usize,
    /// Tree nodes expanded by the search.
    pub nodes: u64,
}

/// What to walk on.
#[derive(Clone, Copy, Debug)]
pub enum WalkSource<'a> {
    Graph(&'a Graph, usize),
    Lattice(LatticeSpec),
}

// ---------------------------------------------------------------------------
// Coefficient arithmetic: u128 when the walk bound fits, big integers otherwise.

trait Coeff: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_count(c: usize) -> Self;
    fn add_to(&mut self, o: &Self);
    fn add_product(&mut self, a: &Self, b: &Self);
    fn scaled(&self, k: usize) -> Self;
    fn to_integer(&self) -> Integer;
}

impl Coeff for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_count(c: usize) -> Self {
        c as u128
    }
    #[inline]
    fn add_to(&mut self, o: &Self) {
        *self += *o;
    }
    #[inline]
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn scaled(&self, k: usize) -> Self {
        self * k as u128
    }
    fn to_integer(&self) -> Integer {
        Integer::from(*self)
    }
}

impl Coeff for Integer {
    fn zero() -> Self {
        Integer::new()
    }
    fn one() -> Self {
        Integer::from(1)
    }
    fn from_count(c: usize) -> Self {
        Integer::from(c)
    }
    fn add_to(&mut self, o: &Self) {
        *self += o;
    }
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self += Integer::from(a * b);
    }
    fn scaled(&self, k: usize) -> Self {
        Integer::from(self * k)
    }
    fn to_integer(&self) -> Integer {
        self.clone()
    }
}

/// `1 / (1 - y S)` truncated to `len` coefficients; needs `s.len() >= len - 1`.
fn invert<C: Coeff>(s: &[C], len: usize) -> Vec<C> {
    let mut w: Vec<C> = Vec::with_capacity(len);
    w.push(C::one());
    for j in 1..len {
        let mut c = C::zero();
        for i in 1..=j {
            c.add_product(&s[i - 1], &w[j - i]);
        }
        w.push(c);
    }
    w
}

// ---------------------------------------------------------------------------
// Walk spaces: sites are indices, neighbours computed on the fly.

trait Space: Sync {
    fn cells(&self) -> usize;
    fn neighbors(&self, p: usize, out: &mut Vec<usize>);
}

struct FiniteSpace<'a>(&'a Graph);

impl Space for FiniteSpace<'_> {
    fn cells(&self) -> usize {
        self.0.n()
    }
    fn neighbors(&self, p: usize, out: &mut Vec<usize>) {
        out.clear();
        out.extend_from_slice(self.0.neighbors(p));
    }
}

/// `Z^d` restricted to the cube `[-J, J]^d`, which a walk of length `J` cannot leave.
struct CubicSpace {
    strides: Vec<usize>,
    cells: usize,
}

impl Space for CubicSpace {
    fn cells(&self) -> usize {
        self.cells
    }
    #[inline]
    fn neighbors(&self, p: usize, out: &mut Vec<usize>) {
        out.clear();
        for &s in &self.strides {
            out.push(p + s);
            out.push(p - s);
        }
    }
}

/// Brick-wall honeycomb on an odd-width grid, so the index parity is the sublattice.
struct HexSpace {
    w: usize,
    cells: usize,
}

impl Space for HexSpace {
    fn cells(&self) -> usize {
        self.cells
    }
    #[inline]
    fn neighbors(&self, p: usize, out: &mut Vec<usize>) {
        out.clear();
        out.push(p + 1);
        out.push(p - 1);
        out.push(if p & 1 == 0 { p + self.w } else { p - self.w });
    }
}

/// Above this many cells the occupancy test scans the current walk instead.
const BITMAP_LIMIT: usize = 1 << 26;
/// Expanded-node count between updates of the shared budget counter.
const FLUSH: u64 = 1 << 12;
/// Depths below this fan out into parallel tasks.
const PAR_DEPTH: usize = 4;

#[derive(Clone)]
struct State {
    bits: Option<Vec<u64>>,
    path: Vec<usize>,
    bufs: Vec<Vec<usize>>,
    local: u64,
}

impl State {
    fn new(cells: usize, depth: usize) -> Self {
        State {
            bits: (cells <= BITMAP_LIMIT).then(|| vec![0u64; cells.div_ceil(64)]),
            path: Vec::with_capacity(depth + 1),
            bufs: vec![Vec::new(); depth + 2],
            local: 0,
        }
    }

    #[inline]
    fn free(&self, p: usize) -> bool {
        match &self.bits {
            Some(b) => b[p >> 6] >> (p & 63) & 1 == 0,
            None => !self.path.contains(&p),
        }
    }

    #[inline]
    fn push(&mut self, p: usize) {
        if let Some(b) = &mut self.bits {
            b[p >> 6] |= 1 << (p & 63);
        }
        self.path.push(p);
    }

    #[inline]
    fn pop(&mut self) {
        let p = self.path.pop().unwrap();
        if let Some(b) = &mut self.bits {
            b[p >> 6] &= !(1 << (p & 63));
        }
    }
}

struct Walker<'a, S: Space, C: Coeff> {
    space: &'a S,
    j: usize,
    budget: u64,
    counter: AtomicU64,
    abort: AtomicBool,
    parallel: bool,
    _c: PhantomData<C>,
}

impl<S: Space, C: Coeff> Walker<'_, S, C> {
    fn tick(&self, st: &mut State) -> Result<()> {
        st.local += 1;
        if st.local >= FLUSH {
            self.flush(st)?;
        }
        Ok(())
    }

    fn flush(&self, st: &mut State) -> Result<()> {
        let before = self.counter.fetch_add(st.local, Ordering::Relaxed);
        let after = before + st.local;
        st.local = 0;
        if before / 100_000_000 != after / 100_000_000 {
            log::info!("self-avoiding walk search: {after} nodes");
        }
        if after > self.budget {
            self.abort.store(true, Ordering::Relaxed);
        }
        if self.abort.load(Ordering::Relaxed) {
            return Err(Error::ResourceLimit(format!("node budget of {} exceeded", self.budget)));
        }
        Ok(())
    }

    /// Series of the node whose walk ends at the top of `st.path`, at `depth`.
    fn series(&self, st: &mut State, depth: usize) -> Result<Vec<C>> {
        self.tick(st)?;
        let len = self.j - depth + 1;
        if len == 1 {
            return Ok(vec![C::one()]);
        }
        let pos = *st.path.last().unwrap();
        let mut nb = std::mem::take(&mut st.bufs[depth]);
        self.space.neighbors(pos, &mut nb);
        nb.retain(|&q| st.free(q));
        let out = if len == 2 {
            vec![C::one(), C::from_count(nb.len())]
        } else {
            let s = self.children_sum(st, &nb, depth)?;
            invert(&s, len)
        };
        st.bufs[depth] = nb;
        Ok(out)
    }

    /// Sum of the series of the children `nb` of the current node.
    fn children_sum(&self, st: &mut State, nb: &[usize], depth: usize) -> Result<Vec<C>> {
        let clen = self.j - depth;
        let mut s = vec![C::zero(); clen];
        if self.parallel && depth < PAR_DEPTH && nb.len() > 1 {
            let parts: Vec<Vec<C>> = nb
                .par_iter()
                .map(|&q| {
                    let mut local = st.clone();
                    local.local = 0;
                    local.push(q);
                    let r = self.series(&mut local, depth + 1);
                    self.flush(&mut local)?;
                    r
                })
                .collect::<Result<_>>()?;
            for w in &parts {
                for (a, b) in s.iter_mut().zip(w) {
                    a.add_to(b);
                }
            }
        } else {
            for &q in nb {
                st.push(q);
                let w = self.series(st, depth + 1);
                st.pop();
                for (a, b) in s.iter_mut().zip(&w?) {
                    a.add_to(b);
                }
            }
        }
        Ok(s)
    }

    /// Root series. With `symmetric`, only the first root branch is expanded and
    /// counted `D` times.
    fn run(&self, origin: usize, symmetric: bool) -> Result<(Vec<C>, u64)> {
        let mut st = State::new(self.space.cells(), self.j);
        st.push(origin);
        let w = if symmetric && self.j >= 2 {
            let mut nb = Vec::new();
            self.space.neighbors(origin, &mut nb);
            st.push(nb[0]);
            let child = self.series(&mut st, 1)?;
            st.pop();
            self.tick(&mut st)?;
            let s: Vec<C> = child.iter().map(|c| c.scaled(nb.len())).collect();
            invert(&s, self.j + 1)
        } else {
            self.series(&mut st, 0)?
        };
        self.flush(&mut st)?;
        Ok((w, self.counter.load(Ordering::Relaxed)))
    }
}

fn walk<S: Space, C: Coeff>(
    space: &S,
    origin: usize,
    j: usize,
    symmetric: bool,
    cfg: &SawConfig,
) -> Result<(Vec<Integer>, u64)> {
    let w: Walker<S, C> = Walker {
        space,
        j,
        budget: cfg.node_budget,
        counter: AtomicU64::new(0),
        abort: AtomicBool::new(false),
        parallel: cfg.parallel && rayon::current_num_threads() > 1,
        _c: PhantomData,
    };
    let (s, nodes) = w.run(origin, symmetric)?;
    Ok((s.iter().map(C::to_integer).collect(), nodes))
}

/// Whether `D^K` (an upper bound on every intermediate count) fits in u128 with headroom.
fn fits_u128(degree: usize, k: usize) -> bool {
    (k as f64) * (degree.max(2) as f64).log2() < 126.0
}

fn walk_any<S: Space>(
    space: &S,
    origin: usize,
    degree: usize,
    k: usize,
    symmetric: bool,
    cfg: &SawConfig,
) -> Result<(Vec<Integer>, u64)> {
    if fits_u128(degree, k) {
        walk::<S, u128>(space, origin, k / 2, symmetric, cfg)
    } else {
        walk::<S, Integer>(space, origin, k / 2, symmetric, cfg)
    }
}

fn spread(w: Vec<Integer>, k: usize) -> Vec<Integer> {
    (0..=k).map(|i| if i % 2 == 0 { w[i / 2].clone() } else { Integer::new() }).collect()
}

/// Closed-walk counts at the root of the tree of self-avoiding walks of `g` from `v`.
pub fn closed_walk_counts_graph(g: &Graph, v: usize, k: usize, cfg: &SawConfig) -> Result<WalkCountTable> {
    if v >= g.n() {
        return invalid(format!("vertex {v} not in graph on {} vertices", g.n()));
    }
    let (w, nodes) = walk_any(&FiniteSpace(g), v, g.max_degree(), k, false, cfg)?;
    Ok(WalkCountTable {
        a: spread(w, k),
        root: format!("vertex {v} of a graph on {} vertices", g.n()),
        max_order: k,
        nodes,
    })
}

/// Closed-walk counts at the root of the tree of self-avoiding walks of a lattice.
pub fn closed_walk_counts_lattice(l: LatticeSpec, k: usize, cfg: &SawConfig) -> Result<WalkCountTable> {
    l.validate()?;
    let j = k / 2;
    let degree = l.coordination();
    let (w, nodes) = match l {
        LatticeSpec::Bethe(d) => (bethe_series(d, j), 0),
        LatticeSpec::Hypercubic(d) => {
            let side = 2 * j + 1;
            let cells = side.checked_pow(d as u32).filter(|&c| c < usize::MAX / 4);
            let Some(cells) = cells else {
                return Err(Error::ResourceLimit(format!("grid for z{d} at order {k} is too large")));
            };
            let strides: Vec<usize> = (0..d).map(|i| side.pow(i as u32)).collect();
            let origin = strides.iter().map(|s| s * j).sum();
            walk_any(&CubicSpace { strides, cells }, origin, degree, k, cfg.root_symmetry, cfg)?
        }
        LatticeSpec::Honeycomb => {
            let w = 2 * j + 1;
            walk_any(&HexSpace { w, cells: w * w }, j * (w + 1), degree, k, cfg.root_symmetry, cfg)?
        }
    };
    Ok(WalkCountTable { a: spread(w, k), root: format!("origin of {l}"), max_order: k, nodes })
}

pub fn closed_walk_counts(source: WalkSource<'_>, k: usize, cfg: &SawConfig) -> Result<WalkCountTable> {
    match source {
        WalkSource::Graph(g, v) => closed_walk_counts_graph(g, v, k, cfg),
        WalkSource::Lattice(l) => closed_walk_counts_lattice(l, k, cfg),
    }
}

/// Root series of the `d`-regular tree: every non-root vertex has `d - 1` children.
fn bethe_series(d: usize, j: usize) -> Vec<Integer> {
    let mut b: Vec<Integer> = vec![Integer::from(1)];
    for len in 2..=j {
        let s: Vec<Integer> = b.iter().map(|c| Integer::from(c * (d - 1))).collect();
        b = invert(&s, len);
    }
    let s: Vec<Integer> = b.iter().map(|c| Integer::from(c * d)).collect();
    invert(&s, j + 1)
}

/// Moments of the matching measure of a vertex-transitive lattice.
pub fn lattice_moments(l: LatticeSpec, k: usize, cfg: &SawConfig) -> Result<MomentSequence> {
    let t = closed_walk_counts_lattice(l, k, cfg)?;
    MomentSequence::from_integers(t.a, l.coordination(), MomentSource::Lattice(l))
}

/// Matching-measure moments of a finite graph as the average of root walk counts.
pub fn average_finite_moments(g: &Graph, k: usize, cfg: &SawConfig) -> Result<MomentSequence> {
    let n = g.n();
    if n == 0 {
        return invalid("graph has no vertices");
    }
    let tables: Vec<WalkCountTable> = (0..n)
        .into_par_iter()
        .map(|v| closed_walk_counts_graph(g, v, k, &SawConfig { parallel: false, ..cfg.clone() }))
        .collect::<Result<_>>()?;
    let mu = (0..=k)
        .map(|i| {
            let total: Integer = tables.iter().map(|t| &t.a[i]).sum();
            Rational::from((total, Integer::from(n)))
        })
        .collect();
    MomentSequence::new(mu, g.max_degree(), MomentSource::Graph { n })
}

/// Explicit tree of self-avoiding walks of length at most `depth` from `v`; node 0 is
/// the trivial walk. Intended as a test oracle.
pub fn build_saw_tree(g: &Graph, v: usize, depth: usize, node_budget: u64) -> Result<RootedGraph> {
    if v >= g.n() {
        return invalid(format!("vertex {v} not in graph on {} vertices", g.n()));
    }
    let mut edges = Vec::new();
    let mut count = 1usize;
    // (walk, tree node id)
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(vec![v], 0)];
    while let Some((walk, id)) = stack.pop() {
        if walk.len() > depth {
            continue;
        }
        let end = *walk.last().unwrap();
        for &w in g.neighbors(end) {
            if walk.contains(&w) {
                continue;
            }
            if count as u64 >= node_budget {
                return Err(Error::ResourceLimit(format!("tree exceeds {node_budget} nodes")));
            }
            edges.push((id, count));
            let mut next = walk.clone();
            next.push(w);
            stack.push((next, count));
            count += 1;
        }
    }
    Ok(RootedGraph { graph: Graph::new(count, edges)?, root: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, pyramid};

    fn u(v: &[Integer]) -> Vec<u64> {
        v.iter().map(|x| x.to_u64().unwrap()).collect()
    }

    #[test]
    fn bethe_four_small_orders() {
        let t = closed_walk_counts_lattice(LatticeSpec::Bethe(4), 6, &SawConfig::default()).unwrap();
        assert_eq!(u(&t.a), vec![1, 0, 4, 0, 28, 0, 232]);
    }

    #[test]
    fn honeycomb_a6() {
        let t = closed_walk_counts_lattice(LatticeSpec::Honeycomb, 6, &SawConfig::default()).unwrap();
        assert_eq!(u(&t.a), vec![1, 0, 3, 0, 15, 0, 87]);
    }

    #[test]
    fn pyramid_apex_a4() {
        let t = closed_walk_counts_graph(&pyramid(), 0, 4, &SawConfig::default()).unwrap();
        assert_eq!(t.a[4], 24);
    }

    #[test]
    fn series_equals_walks_on_explicit_tree() {
        for (g, v) in [(pyramid(), 0), (pyramid(), 1), (cycle(5).unwrap(), 0), (complete(4), 2)] {
            let k = 10;
            let tree = build_saw_tree(&g, v, k / 2, u64::MAX).unwrap();
            let oracle = tree.graph.closed_walk_counts(tree.root, k);
            let fast = closed_walk_counts_graph(&g, v, k, &SawConfig::default()).unwrap();
            assert_eq!(fast.a, oracle);
        }
    }

    #[test]
    fn explicit_trees() {
        let t = build_saw_tree(&complete(2), 0, 5, u64::MAX).unwrap();
        assert_eq!((t.graph.n(), t.graph.edge_count()), (2, 1));
        // From the apex: four branches, each a walk around the 4-cycle in either direction.
        let p = build_saw_tree(&pyramid(), 0, 10, u64::MAX).unwrap();
        assert_eq!(p.graph.n(), 29);
        assert_eq!(p.graph.degree(0), 4);
        let d = p.graph.distances_from(0);
        assert!((0..29).filter(|&v| p.graph.degree(v) == 1).all(|v| d[v] == 4));
        assert_eq!(build_saw_tree(&pyramid(), 1, 10, u64::MAX).unwrap().graph.n(), 33);
        let c = build_saw_tree(&cycle(5).unwrap(), 0, 10, u64::MAX).unwrap();
        assert_eq!(c.graph.n(), 9);
        assert!(build_saw_tree(&pyramid(), 0, 10, 20).is_err());
    }

    #[test]
    fn root_symmetry_and_coefficient_types_agree() {
        for l in [LatticeSpec::Hypercubic(2), LatticeSpec::Hypercubic(3), LatticeSpec::Honeycomb] {
            let a = closed_walk_counts_lattice(l, 12, &SawConfig::default()).unwrap();
            let b = closed_walk_counts_lattice(
                l,
                12,
                &SawConfig { root_symmetry: false, parallel: false, ..Default::default() },
            )
            .unwrap();
            assert_eq!(a.a, b.a);
            let space = CubicSpace { strides: vec![1, 13], cells: 169 };
            if l == LatticeSpec::Hypercubic(2) {
                let (w, _) = walk::<CubicSpace, Integer>(&space, 6 * 14, 6, true, &SawConfig::default()).unwrap();
                assert_eq!(spread(w, 12), a.a);
            }
        }
    }

    #[test]
    fn node_budget_enforced() {
        let cfg = SawConfig { node_budget: 1000, ..Default::default() };
        assert!(matches!(
            closed_walk_counts_lattice(LatticeSpec::Hypercubic(2), 20, &cfg),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn path_average_matches_newton() {
        let m = average_finite_moments(&path(3), 4, &SawConfig::default()).unwrap();
        assert_eq!(*m.mu(4), Rational::from((8, 3)));
    }
}
