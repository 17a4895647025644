//! Density views: kernel smoothing, Legendre projections, atoms.

use mdim_core::density::{
    atom_probe, atom_probe_counts, bethe_density, bethe_mass, kernel_smooth, kernel_smooth_points, l2_projection,
    legendre_coefficients, legendre_moments, root_multiplicity, uniform_grid,
};
use mdim_core::graph::{cycle, cylinder, hypercube, petersen, torus, Graph};
use mdim_core::matching::{
    finite_moments, isolate_roots, matching_counts, strip_matching_counts, torus_matching_counts, MatchingPolynomial,
};
use mdim_core::moments::MomentSequence;
use mdim_core::saw::{lattice_moments, SawConfig};
use mdim_core::LatticeSpec;
use rug::Rational;

fn fine() -> Rational {
    Rational::from((1, 1u64 << 40))
}

fn sup_error_bethe4(n: usize, mu: &MomentSequence) -> f64 {
    let d = l2_projection(mu, n, &Rational::from(12), 2001).unwrap();
    d.grid
        .iter()
        .zip(&d.values)
        .filter(|(x, _)| x.abs() <= 3.0)
        .map(|(&x, &v)| (v - bethe_density(4, x)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn kernel_mass_and_symmetry() {
    for g in [cycle(6).unwrap(), cylinder(6, 4).unwrap(), petersen()] {
        let rm = isolate_roots(&matching_counts(&g).unwrap(), &fine()).unwrap();
        for h in [None, Some(0.2), Some(0.6)] {
            let d = kernel_smooth(&rm, h, 4001).unwrap();
            assert!((d.mass - 1.0).abs() <= 1e-6, "mass {}", d.mass);
            assert!(d.values.iter().all(|&v| v >= 0.0));
            let n = d.values.len();
            assert!((0..n).all(|i| (d.values[i] - d.values[n - 1 - i]).abs() < 1e-9));
        }
    }
    let k2 = kernel_smooth_points(&[-1.0, 1.0], 0.5, uniform_grid(-2.0, 2.0, 801)).unwrap();
    assert!((k2.mass - 1.0).abs() < 1e-6);
    assert!((k2.values[200] - 35.0 / 32.0).abs() < 1e-12 && k2.values[400] == 0.0);
    assert!(kernel_smooth_points(&[0.0], 0.0, uniform_grid(-1.0, 1.0, 3)).is_err());
}

#[test]
fn bethe_projection_converges() {
    let mu = lattice_moments(LatticeSpec::Bethe(4), 24, &SawConfig::default()).unwrap();
    let errs: Vec<f64> = [8, 16, 24].iter().map(|&n| sup_error_bethe4(n, &mu)).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[2] <= 0.02, "{errs:?}");
    for d in 3..=6 {
        assert!((bethe_mass(d, 2001) - 1.0).abs() <= 1e-8);
    }
}

#[test]
fn projection_is_linear_and_matches_quadrature() {
    let r2 = Rational::from(9);
    let r = 3f64;
    let graphs: Vec<Graph> = vec![cycle(6).unwrap(), cylinder(4, 2).unwrap(), hypercube(3)];
    let n = 10;
    for g in &graphs {
        let p = matching_counts(g).unwrap();
        let mu = finite_moments(&p, n, 3);
        let coeffs = legendre_moments(&mu, n, &r2, 256).unwrap();
        // Quadrature against the root measure itself.
        let rm = isolate_roots(&p, &fine()).unwrap();
        let pts = rm.points_f64();
        let leg = legendre_coefficients(n);
        for (j, pj) in leg.iter().enumerate() {
            let direct: f64 =
                pts.iter().map(|&x| pj.iter().rev().fold(0.0, |acc, c| acc * (x / r) + c.to_f64())).sum::<f64>()
                    / pts.len() as f64;
            assert!((direct - coeffs[j]).abs() < 1e-9, "P_{j}: {direct} vs {}", coeffs[j]);
        }
    }
    // An equal mixture of two measures projects to the mean of the projections.
    let a = finite_moments(&matching_counts(&graphs[0]).unwrap(), n, 3);
    let b = finite_moments(&matching_counts(&graphs[2]).unwrap(), n, 3);
    let mix: Vec<Rational> = a.moments().iter().zip(b.moments()).map(|(x, y)| Rational::from(x + y) / 2u32).collect();
    let mix = MomentSequence::new(mix, 3, a.source().clone()).unwrap();
    let (ca, cb, cm) = (
        legendre_moments(&a, n, &r2, 256).unwrap(),
        legendre_moments(&b, n, &r2, 256).unwrap(),
        legendre_moments(&mix, n, &r2, 256).unwrap(),
    );
    for j in 0..=n {
        assert!((cm[j] - (ca[j] + cb[j]) / 2.0).abs() < 1e-14);
    }
    assert!(legendre_moments(&a, n + 2, &r2, 256).is_err());
    assert!(l2_projection(&a, 4, &Rational::from(4), 11).is_err());
}

#[test]
fn atoms_of_square_tori() {
    let family: Vec<MatchingPolynomial> = [4, 6, 8].iter().map(|&n| torus_matching_counts(n, n).unwrap()).collect();
    assert_eq!(family[0], matching_counts(&torus(4, 4).unwrap()).unwrap());
    let at0 = atom_probe_counts(&family, &Rational::new()).unwrap();
    assert!(at0.iter().all(|f| *f == 0));
    let at1 = atom_probe_counts(&family, &Rational::from(1)).unwrap();
    assert!(at1.iter().all(|f| *f == 0));
    // Odd cycles keep one unmatched vertex.
    let odd: Vec<Graph> = [5, 7, 9].iter().map(|&n| cycle(n).unwrap()).collect();
    let fr = atom_probe(&odd, &Rational::new()).unwrap();
    assert!(fr.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn vertex_transitive_roots_are_simple() {
    let graphs = [torus(3, 4).unwrap(), torus(4, 4).unwrap(), petersen(), hypercube(3), cycle(8).unwrap()];
    for g in &graphs {
        let p = matching_counts(g).unwrap();
        for x in -4..=4 {
            assert!(root_multiplicity(&p, &Rational::from(x)) <= 1);
        }
        let rm = isolate_roots(&p, &fine()).unwrap();
        assert!(rm.roots.iter().all(|r| r.mult == 1));
        let fr = atom_probe(std::slice::from_ref(g), &Rational::from(1)).unwrap();
        assert!(fr[0] <= Rational::from((1, g.n() as u32)));
    }
}

#[test]
fn grid_strip_profile() {
    // A smaller sibling of the 10 x 30 strip: symmetric, compactly supported, modest peak.
    let rm = isolate_roots(&strip_matching_counts(10, 8).unwrap(), &fine()).unwrap();
    let d = kernel_smooth(&rm, Some(0.15), 4001).unwrap();
    let r = 12f64.sqrt();
    assert!((d.mass - 1.0).abs() <= 1e-6);
    assert!(d.grid.iter().zip(&d.values).all(|(x, v)| *v == 0.0 || x.abs() <= r + 0.15));
    assert!(d.max() < 0.35 && d.max() > 0.1, "{}", d.max());
}
