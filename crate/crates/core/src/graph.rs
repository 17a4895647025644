//! Finite simple graphs and generators for the families used throughout the crate.

use std::collections::VecDeque;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Finite undirected simple graph on vertices `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically; the
/// adjacency lists are sorted. Values are immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

/// A graph with a distinguished root vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedGraph {
    pub graph: Graph,
    pub root: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, parallel edges and out-of-range labels.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u},{v}) out of range for {n} vertices"));
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            es.push((u.min(v), u.max(v)));
        }
        es.sort_unstable();
        if let Some(w) = es.windows(2).find(|w| w[0] == w[1]) {
            return invalid(format!("parallel edge ({},{})", w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &es {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges: es, adj })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Graph {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_regular(&self) -> bool {
        self.adj.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Subgraph induced by `keep`, relabelled in the order given.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| pos[*u] != usize::MAX && pos[*v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        Graph::new(keep.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// `G - v`; remaining vertices keep their relative order.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// `G - e`.
    pub fn remove_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let e = (u.min(v), u.max(v));
        if !self.edges.contains(&e) {
            return invalid(format!("edge ({u},{v}) not present"));
        }
        Graph::new(self.n, self.edges.iter().copied().filter(|&f| f != e))
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let edges = self.edges.iter().copied().chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        Graph::new(self.n + other.n, edges).expect("union of simple graphs is simple")
    }

    /// `k` disjoint copies of this graph.
    pub fn copies(&self, k: usize) -> Graph {
        (1..k).fold(if k == 0 { Graph::empty(0) } else { self.clone() }, |acc, _| acc.disjoint_union(self))
    }

    /// Cartesian product; vertex `(a, b)` gets label `a + |G| * b`.
    pub fn cartesian_product(&self, other: &Graph) -> Graph {
        let n1 = self.n;
        let mut edges = Vec::new();
        for b in 0..other.n {
            for &(u, v) in &self.edges {
                edges.push((u + n1 * b, v + n1 * b));
            }
        }
        for a in 0..n1 {
            for &(u, v) in &other.edges {
                edges.push((a + n1 * u, a + n1 * v));
            }
        }
        Graph::new(n1 * other.n, edges).expect("product of simple graphs is simple")
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Breadth-first distances from `root` (`usize::MAX` when unreachable).
    pub fn distances_from(&self, root: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Rooted ball of radius `r` around `root` (induced subgraph), root relabelled to 0.
    pub fn ball(&self, root: usize, r: usize) -> RootedGraph {
        let dist = self.distances_from(root);
        let mut keep: Vec<usize> = (0..self.n).filter(|&v| dist[v] <= r).collect();
        keep.sort_by_key(|&v| (dist[v], v));
        RootedGraph { graph: self.induced(&keep), root: 0 }
    }

    /// Number of closed walks of each length `0..=max_len` that start and end at `root`,
    /// by repeated multiplication with the adjacency matrix.
    pub fn closed_walk_counts(&self, root: usize, max_len: usize) -> Vec<Integer> {
        let mut cur = vec![Integer::new(); self.n];
        cur[root] = Integer::from(1);
        let mut out = vec![Integer::from(1)];
        for _ in 0..max_len {
            let mut next = vec![Integer::new(); self.n];
            for (v, c) in cur.iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                for &w in &self.adj[v] {
                    next[w] += c;
                }
            }
            cur = next;
            out.push(cur[root].clone());
        }
        out
    }

    pub fn to_json(&self) -> String {
        let g = GraphJson { n: self.n, edges: self.edges.iter().map(|&(u, v)| [u, v]).collect() };
        serde_json::to_string(&g).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Graph> {
        let g: GraphJson = serde_json::from_str(s)?;
        Graph::new(g.n, g.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

// ---------------------------------------------------------------------------
// Named families

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return invalid("cycle needs at least 3 vertices");
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::new(a + b, (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j)))).unwrap()
}

/// Star with `leaves` leaves; the centre is vertex 0.
pub fn star(leaves: usize) -> Graph {
    complete_bipartite(1, leaves)
}

/// Wheel: a cycle on `rim` vertices plus a hub joined to all of them.
pub fn wheel(rim: usize) -> Result<Graph> {
    let c = cycle(rim)?;
    Graph::new(rim + 1, c.edges().iter().copied().chain((0..rim).map(|i| (i, rim))))
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner)).unwrap()
}

/// The five-vertex "pyramid": a 4-cycle 2-3-4-5 with apex 1 joined to all of it.
/// Vertex `k` of the usual 1-based drawing is label `k - 1` here.
pub fn pyramid() -> Graph {
    let e = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 5), (3, 4), (4, 5)];
    Graph::new(5, e.iter().map(|&(u, v)| (u - 1, v - 1))).unwrap()
}

/// Circulant graph on `n` vertices joining `i` and `i ± j` for each jump `j`.
pub fn circulant(n: usize, jumps: &[usize]) -> Result<Graph> {
    let mut edges = Vec::new();
    for &j in jumps {
        if j == 0 || 2 * j > n {
            return invalid(format!("jump {j} invalid for circulant on {n} vertices"));
        }
        for i in 0..n {
            let k = (i + j) % n;
            let e = (i.min(k), i.max(k));
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
    }
    Graph::new(n, edges)
}

pub fn hypercube(d: usize) -> Graph {
    let n = 1usize << d;
    Graph::new(n, (0..n).flat_map(|v| (0..d).map(move |i| (v, v ^ (1 << i)))).filter(|(u, v)| u < v)).unwrap()
}

/// The box `[0, s_1) x ... x [0, s_d)` in `Z^d`, or the torus when `periodic`.
///
/// The first coordinate varies fastest in the vertex numbering.
pub fn build_box(d: usize, sides: &[usize], periodic: bool) -> Result<Graph> {
    if d == 0 {
        return invalid("box dimension must be at least 1");
    }
    if sides.len() != d {
        return invalid(format!("expected {d} side lengths, got {}", sides.len()));
    }
    if sides.iter().any(|&s| s == 0) {
        return invalid("box sides must be at least 1");
    }
    if periodic && sides.iter().any(|&s| s < 3) {
        return invalid("periodic boxes need all sides >= 3 (otherwise parallel edges arise)");
    }
    let n: usize = sides.iter().product();
    let mut strides = vec![1usize; d];
    for i in 1..d {
        strides[i] = strides[i - 1] * sides[i - 1];
    }
    let mut edges = Vec::with_capacity(n * d);
    for v in 0..n {
        for i in 0..d {
            let x = (v / strides[i]) % sides[i];
            if x + 1 < sides[i] {
                edges.push((v, v + strides[i]));
            } else if periodic {
                edges.push((v, v - x * strides[i]));
            }
        }
    }
    Graph::new(n, edges)
}

/// Honeycomb patch made of `rows x cols` hexagonal cells in the brick-wall embedding.
///
/// Sites are integer points `(x, y)`; horizontal bonds join `(x, y)` and `(x + 1, y)`,
/// vertical bonds join `(x, y)` and `(x, y + 1)` when `x + y` is even. Cell `(i, j)`
/// occupies `x` in `[a, a + 2]`, `y` in `[j, j + 1]` with `a = 2i + (j mod 2)`.
///
/// With `periodic`, the brick wall is wrapped on a `2 cols x rows` torus; this needs an
/// even number of rows (so the sublattice parity is consistent) and at least two of each.
pub fn build_honeycomb_patch(rows: usize, cols: usize, periodic: bool) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return invalid("honeycomb patch needs rows, cols >= 1");
    }
    if periodic {
        if rows % 2 != 0 || rows < 2 || cols < 2 {
            return invalid("periodic honeycomb needs an even number of rows >= 2 and cols >= 2");
        }
        let w = 2 * cols;
        let h = rows;
        let id = |x: usize, y: usize| (x % w) + w * (y % h);
        let mut edges = Vec::new();
        for y in 0..h {
            for x in 0..w {
                edges.push((id(x, y), id(x + 1, y)));
                if (x + y) % 2 == 0 {
                    edges.push((id(x, y), id(x, y + 1)));
                }
            }
        }
        return Graph::new(w * h, edges);
    }
    let mut sites: Vec<(i64, i64)> = Vec::new();
    let mut bonds: Vec<((i64, i64), (i64, i64))> = Vec::new();
    for j in 0..rows as i64 {
        for i in 0..cols as i64 {
            let a = 2 * i + (j % 2);
            let b = j;
            let corners = [(a, b), (a + 1, b), (a + 2, b), (a + 2, b + 1), (a + 1, b + 1), (a, b + 1)];
            for k in 0..6 {
                sites.push(corners[k]);
                let (p, q) = (corners[k], corners[(k + 1) % 6]);
                bonds.push((p.min(q), p.max(q)));
            }
        }
    }
    sites.sort_unstable();
    sites.dedup();
    bonds.sort_unstable();
    bonds.dedup();
    let idx = |s: (i64, i64)| sites.binary_search(&s).unwrap();
    Graph::new(sites.len(), bonds.iter().map(|&(p, q)| (idx(p), idx(q))))
}

/// `C_m x P_n`: `n` copies of an `m`-cycle joined in a row. Vertex `(i, j)` (cycle
/// position `i`, column `j`) is label `i + m * j`.
pub fn cylinder(m: usize, n: usize) -> Result<Graph> {
    if n == 0 {
        return invalid("cylinder length must be at least 1");
    }
    Ok(cycle(m)?.cartesian_product(&path(n)))
}

/// `C_m x C_n`, labelled like [`cylinder`].
pub fn torus(m: usize, n: usize) -> Result<Graph> {
    Ok(cycle(m)?.cartesian_product(&cycle(n)?))
}

impl From<Graph> for RootedGraph {
    fn from(graph: Graph) -> Self {
        RootedGraph { graph, root: 0 }
    }
}

impl std::str::FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Graph> {
        Graph::from_json(s)
    }
}
