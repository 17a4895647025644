//! Property tests for the structural invariants.

use mdim_core::graph::Graph;
use mdim_core::matching::{
    derivative_identity_holds, finite_moments, godsil_ratio_check, isolate_roots, matching_counts,
};
use mdim_core::moments::support_radius_sq;
use mdim_core::saw::{average_finite_moments, SawConfig};
use mdim_core::LatticeSpec;
use proptest::prelude::*;
use rug::{Integer, Rational};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m)
            .prop_map(move |keep| Graph::new(n, pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_structure(g in arb_graph(9)) {
        let deg_sum: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(deg_sum, 2 * g.edge_count());
        for &(u, v) in g.edges() {
            prop_assert!(u < v);
            prop_assert!(g.neighbors(u).contains(&v) && g.neighbors(v).contains(&u));
        }
        prop_assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn matching_polynomial_invariants(g in arb_graph(9)) {
        let p = matching_counts(&g).unwrap();
        prop_assert_eq!(&p.counts()[0], &Integer::from(1));
        prop_assert_eq!(p.edge_count(), Integer::from(g.edge_count()));
        prop_assert!(2 * p.nu() <= g.n());
        prop_assert!(p.counts().iter().all(|c| *c > 0));
        prop_assert!(derivative_identity_holds(&g).unwrap());
    }

    #[test]
    fn roots_are_real_and_bounded(g in arb_graph(8)) {
        let p = matching_counts(&g).unwrap();
        let rm = isolate_roots(&p, &Rational::from((1, 1 << 16))).unwrap();
        let total: usize = rm.roots.iter().map(|r| r.mult).sum();
        prop_assert_eq!(total, g.n());
        let bound = Rational::from(support_radius_sq(g.max_degree()));
        for r in &rm.roots {
            // The interval meets [-R, R]: its inner end squared is at most R^2.
            let inner = if r.lo >= 0 { r.lo.clone() } else if r.hi <= 0 { -r.hi.clone() } else { Rational::new() };
            prop_assert!(Rational::from(&inner * &inner) <= bound);
        }
    }

    #[test]
    fn moments_are_consistent(g in arb_graph(8)) {
        let p = matching_counts(&g).unwrap();
        let mu = finite_moments(&p, 12, g.max_degree());
        prop_assert!(mu.invariant_violations().is_empty(), "{:?}", mu.invariant_violations());
        prop_assert_eq!(mu.mu(2), &Rational::from((2 * g.edge_count(), g.n())));
        let walked = average_finite_moments(&g, 12, &SawConfig::default()).unwrap();
        prop_assert_eq!(walked.moments(), mu.moments());
    }

    #[test]
    fn godsil_identity(g in arb_graph(8), root in 0usize..8) {
        let v = root % g.n();
        prop_assert!(godsil_ratio_check(&g, v, 10).unwrap());
    }

    #[test]
    fn disjoint_union_multiplies(a in arb_graph(6), b in arb_graph(6)) {
        let pa = matching_counts(&a).unwrap();
        let pb = matching_counts(&b).unwrap();
        prop_assert_eq!(matching_counts(&a.disjoint_union(&b)).unwrap(), pa.disjoint_union(&pb));
    }

    #[test]
    fn lattice_neighbours_are_symmetric(steps in proptest::collection::vec(0usize..8, 0..12), which in 0usize..5) {
        let l = [LatticeSpec::Hypercubic(2), LatticeSpec::Hypercubic(3), LatticeSpec::Honeycomb, LatticeSpec::Bethe(3), LatticeSpec::Bethe(4)][which];
        let mut s = l.origin();
        for st in steps {
            let nb = l.neighbors(&s).unwrap();
            s = nb[st % nb.len()].clone();
        }
        prop_assert!(l.is_canonical(&s));
        let nb = l.neighbors(&s).unwrap();
        prop_assert_eq!(nb.len(), l.coordination());
        for t in &nb {
            prop_assert!(l.neighbors(t).unwrap().contains(&s));
        }
    }
}
