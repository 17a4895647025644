//! A fixed corpus of small graphs for invariant checks: named families plus seeded
//! random graphs, all on at most 10 vertices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{
    build_box, build_honeycomb_patch, circulant, complete, complete_bipartite, cycle, hypercube, path, petersen,
    pyramid, star, torus, wheel, Graph,
};

#[derive(Clone, Debug)]
pub struct CorpusGraph {
    pub name: String,
    pub graph: Graph,
}

fn named(name: impl Into<String>, graph: Graph) -> CorpusGraph {
    CorpusGraph { name: name.into(), graph }
}

/// `G(n, p)` drawn from a ChaCha stream seeded with `seed`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("simple by construction")
}

/// The 20 seeded random graphs of the corpus (5 to 10 vertices).
pub fn random_graphs() -> Vec<CorpusGraph> {
    (0..20u64)
        .map(|i| {
            let n = 5 + (i as usize % 6);
            let p = 0.3 + 0.05 * (i % 5) as f64;
            named(format!("random_{i}_n{n}"), random_graph(n, p, 0x6d64_696d + i))
        })
        .collect()
}

/// The 50-graph corpus.
pub fn corpus() -> Vec<CorpusGraph> {
    let mut out = vec![
        named("K2", complete(2)),
        named("P3", path(3)),
        named("P4", path(4)),
        named("P5", path(5)),
        named("P6", path(6)),
        named("C3", cycle(3).unwrap()),
        named("C4", cycle(4).unwrap()),
        named("C5", cycle(5).unwrap()),
        named("C6", cycle(6).unwrap()),
        named("C7", cycle(7).unwrap()),
        named("K4", complete(4)),
        named("K5", complete(5)),
        named("K6", complete(6)),
        named("K2,3", complete_bipartite(2, 3)),
        named("K3,3", complete_bipartite(3, 3)),
        named("star4", star(4)),
        named("star6", star(6)),
        named("wheel5", wheel(5).unwrap()),
        named("wheel7", wheel(7).unwrap()),
        named("petersen", petersen()),
        named("pyramid", pyramid()),
        named("cube", hypercube(3)),
        named("circ7_12", circulant(7, &[1, 2]).unwrap()),
        named("circ8_12", circulant(8, &[1, 2]).unwrap()),
        named("circ9_13", circulant(9, &[1, 3]).unwrap()),
        named("circ10_14", circulant(10, &[1, 4]).unwrap()),
        named("grid2x3", build_box(2, &[2, 3], false).unwrap()),
        named("grid3x3", build_box(2, &[3, 3], false).unwrap()),
        named("torus3x3", torus(3, 3).unwrap()),
        named("hex1x2", build_honeycomb_patch(1, 2, false).unwrap()),
    ];
    out.extend(random_graphs());
    out
}

/// All connected circulants on 3..=12 vertices, one per jump set.
pub fn circulants(max_n: usize) -> Vec<CorpusGraph> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        let jumps: Vec<usize> = (1..=n / 2).collect();
        for mask in 1u32..(1 << jumps.len()) {
            let js: Vec<usize> =
                jumps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &j)| j).collect();
            let g = circulant(n, &js).expect("valid jumps");
            if g.is_connected() {
                out.push(named(format!("circ{n}_{js:?}"), g));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let c = corpus();
        assert_eq!(c.len(), 50);
        assert!(c.iter().all(|g| g.graph.n() <= 10));
        let mut names: Vec<_> = c.iter().map(|g| g.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 50);
        // Seeded: identical on every call.
        assert_eq!(random_graphs()[3].graph, random_graphs()[3].graph);
    }

    #[test]
    fn circulant_family() {
        let c = circulants(12);
        assert!(c.iter().all(|g| g.graph.is_regular() && g.graph.is_connected()));
        assert!(c.iter().any(|g| g.graph.n() == 12));
    }
}
