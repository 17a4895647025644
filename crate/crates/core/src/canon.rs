//! Label-invariant hashing by colour refinement, and exact isomorphism testing.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::graph::Graph;

fn h<T: Hash>(x: T) -> u64 {
    let mut s = DefaultHasher::new();
    x.hash(&mut s);
    s.finish()
}

/// Stable vertex colours from 1-dimensional Weisfeiler–Leman refinement.
///
/// Colours are hashes of iterated neighbourhood signatures, so they are comparable
/// across different graphs.
pub fn refined_colors(g: &Graph) -> Vec<u64> {
    let n = g.n();
    let mut col: Vec<u64> = (0..n).map(|v| h(g.degree(v))).collect();
    let mut classes = count_classes(&col);
    for _ in 0..n {
        let next: Vec<u64> = (0..n)
            .map(|v| {
                let mut sig: Vec<u64> = g.neighbors(v).iter().map(|&w| col[w]).collect();
                sig.sort_unstable();
                h((col[v], sig))
            })
            .collect();
        let c = count_classes(&next);
        col = next;
        if c == classes {
            break;
        }
        classes = c;
    }
    col
}

fn count_classes(col: &[u64]) -> usize {
    let mut c = col.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Isomorphism-invariant 64-bit hash of a graph.
pub fn wl_hash(g: &Graph) -> u64 {
    let mut col = refined_colors(g);
    col.sort_unstable();
    h((g.n(), g.edge_count(), col))
}

/// Exact isomorphism test by backtracking over colour-compatible assignments.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let ca = refined_colors(a);
    let cb = refined_colors(b);
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    // Assign a's vertices in BFS-like order so adjacency constraints bite early.
    let mut order: Vec<usize> = Vec::with_capacity(a.n());
    let mut placed = vec![false; a.n()];
    for s in 0..a.n() {
        if placed[s] {
            continue;
        }
        placed[s] = true;
        order.push(s);
        let mut i = order.len() - 1;
        while i < order.len() {
            for &w in a.neighbors(order[i]) {
                if !placed[w] {
                    placed[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
    }
    let mut map = vec![usize::MAX; a.n()];
    let mut used = vec![false; b.n()];
    extend(a, b, &ca, &cb, &order, 0, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Graph,
    b: &Graph,
    ca: &[u64],
    cb: &[u64],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    for w in 0..b.n() {
        if used[w] || cb[w] != ca[v] {
            continue;
        }
        // Mapped neighbours of v must be exactly the mapped vertices adjacent to w.
        let ok = order[..depth].iter().all(|&u| a.has_edge(u, v) == b.has_edge(map[u], w));
        if !ok {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(a, b, ca, cb, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Partition of the vertices by isomorphism class of the vertex-deleted graph `G - v`.
pub fn vertex_deletion_classes(g: &Graph) -> Vec<Vec<usize>> {
    let dels: Vec<Graph> = (0..g.n()).map(|v| g.remove_vertex(v)).collect();
    let hashes: Vec<u64> = dels.iter().map(wl_hash).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n() {
        match classes.iter_mut().find(|c| hashes[c[0]] == hashes[v] && is_isomorphic(&dels[c[0]], &dels[v])) {
            Some(c) => c.push(v),
            None => classes.push(vec![v]),
        }
    }
    classes
}
