//! Thermodynamic identities on finite graphs and lattices.

use mdim_core::corpus::corpus;
use mdim_core::graph::{complete, cycle, cylinder, pyramid, Graph};
use mdim_core::interval::parse_rational;
use mdim_core::matching::torus_matching_counts;
use mdim_core::saw::{lattice_moments, SawConfig};
use mdim_core::thermo::{darroch_bounds_check, ThermoContext};
use mdim_core::LatticeSpec;
use rug::Rational;

fn q(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

fn small_graphs() -> Vec<(&'static str, Graph)> {
    vec![("K2", complete(2)), ("C4", cycle(4).unwrap()), ("C6", cycle(6).unwrap()), ("pyramid", pyramid())]
}

#[test]
fn pressure_is_increasing_and_inverts() {
    for (name, g) in small_graphs() {
        let ctx = ThermoContext::finite(&g).unwrap();
        let grid: Vec<Rational> = (0..40).map(|i| q(i * i + 1, 37)).collect();
        let p: Vec<Rational> = grid.iter().map(|t| ctx.pressure(t).unwrap().exact.unwrap()).collect();
        assert!(p.windows(2).all(|w| w[0] < w[1]), "{name}");
        assert!(p.iter().all(|x| *x < ctx.p_star()));
        for (t, pt) in grid.iter().zip(&p).step_by(7) {
            let inv = ctx.invert_pressure(pt).unwrap();
            assert!((inv.t() - t.to_f64()).abs() <= 1e-9 * t.to_f64().max(1.0), "{name} t={t}");
        }
    }
}

#[test]
fn entropy_slope_is_minus_half_log_t() {
    let h = q(1, 10_000);
    for (name, g) in small_graphs() {
        let ctx = ThermoContext::finite(&g).unwrap();
        let p_star = ctx.p_star();
        for frac in [q(1, 5), q(1, 2), q(4, 5)] {
            let p = Rational::from(&p_star * &frac);
            let up = ctx.lambda_of_p(&Rational::from(&p + &h)).unwrap().value;
            let down = ctx.lambda_of_p(&Rational::from(&p - &h)).unwrap().value;
            let slope = (up - down) / (2.0 * h.to_f64());
            let t = ctx.invert_pressure(&p).unwrap().t();
            assert!((slope + 0.5 * t.ln()).abs() <= 1e-4, "{name} p={p}: {slope} vs {}", -0.5 * t.ln());
        }
    }
}

#[test]
fn entropy_is_concave() {
    for (name, g) in small_graphs() {
        let ctx = ThermoContext::finite(&g).unwrap();
        let p_star = ctx.p_star();
        let pts: Vec<Rational> = (0..=20).map(|i| Rational::from(&p_star * q(i, 20))).collect();
        let lam: Vec<_> = pts.iter().map(|p| ctx.lambda_of_p(p).unwrap()).collect();
        for w in lam.windows(3) {
            let second = w[0].value - 2.0 * w[1].value + w[2].value;
            assert!(second <= w[0].eps + 2.0 * w[1].eps + w[2].eps + 1e-12, "{name}: {second}");
        }
    }
}

#[test]
fn disjoint_copies_have_the_same_thermodynamics() {
    for (name, g) in small_graphs() {
        let one = ThermoContext::finite(&g).unwrap();
        for k in 2..=3 {
            let many = ThermoContext::finite(&g.copies(k)).unwrap();
            assert_eq!(many.p_star(), one.p_star());
            for t in [q(1, 3), q(1, 1), q(7, 2)] {
                assert_eq!(many.pressure(&t).unwrap().exact, one.pressure(&t).unwrap().exact, "{name}");
            }
            for p in [q(1, 4), q(1, 2)].iter().map(|f| Rational::from(f * one.p_star())).chain([one.p_star()]) {
                let (a, b) = (one.lambda_of_p(&p).unwrap(), many.lambda_of_p(&p).unwrap());
                assert!((a.value - b.value).abs() <= a.eps + b.eps + 1e-15, "{name} x{k} p={p}");
            }
        }
    }
}

#[test]
fn darroch_bounds_hold() {
    for cg in corpus() {
        let nu = mdim_core::matching::matching_counts(&cg.graph).unwrap().nu();
        for k in 1..=nu {
            assert!(darroch_bounds_check(&cg.graph, k).unwrap(), "{} k={k}", cg.name);
        }
    }
    assert!(darroch_bounds_check(&cylinder(10, 4).unwrap(), 10).unwrap());
}

#[test]
fn top_density_limit() {
    // C4: nu = 2, m_2 = 2.
    let ctx = ThermoContext::finite(&cycle(4).unwrap()).unwrap();
    let exact = 2f64.ln() / 4.0;
    assert!((ctx.lambda_of_p(&q(1, 1)).unwrap().value - exact).abs() < 1e-15);
    let seq = ctx.escalate_to_p_star(2, 40).unwrap();
    assert!(seq.windows(2).all(|w| w[1].1.value <= w[0].1.value + 1e-15));
    assert!((seq.last().unwrap().1.value - exact).abs() < 1e-9);
    assert_eq!(ctx.lambda_of_p(&q(3, 2)).unwrap().value, 0.0);
}

#[test]
fn lattice_intervals_nest() {
    let mu = lattice_moments(LatticeSpec::Hypercubic(2), 28, &SawConfig::default()).unwrap();
    let vals: Vec<_> =
        (4..=7).map(|j| ThermoContext::lattice(mu.truncate(4 * j).unwrap()).free_energy().unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[1].eps < w[0].eps));
    for a in &vals {
        for b in &vals {
            assert!((a.value - b.value).abs() <= a.eps + b.eps);
        }
    }
}

#[test]
fn tori_approach_the_lattice() {
    let lat = ThermoContext::lattice(lattice_moments(LatticeSpec::Hypercubic(2), 28, &SawConfig::default()).unwrap());
    let f = lat.free_energy().unwrap();
    let p = lat.pressure(&q(1, 1)).unwrap();
    let mut last = (f64::INFINITY, f64::INFINITY);
    for n in [4usize, 6, 8] {
        let ctx = ThermoContext::from_polynomial(torus_matching_counts(n, n).unwrap(), 4);
        let df = (ctx.free_energy().unwrap().value - f.value).abs();
        let dp = (ctx.pressure(&q(1, 1)).unwrap().value - p.value).abs();
        assert!(df < last.0 && dp < last.1, "n={n}: {df} {dp}");
        last = (df, dp);
    }
    assert!(last.0 <= f.eps + 1e-4 && last.1 <= p.eps + 1e-3, "{last:?}");
}

#[test]
fn lattice_inversion_recovers_unit_activity() {
    let lat = ThermoContext::lattice(lattice_moments(LatticeSpec::Hypercubic(2), 32, &SawConfig::default()).unwrap());
    let inv = lat.invert_pressure(&parse_rational("0.638123105").unwrap()).unwrap();
    assert!(inv.t_lo <= 1 && inv.t_hi >= 1);
    assert!((inv.t() - 1.0).abs() <= 1e-4, "{}", inv.t());
}

#[test]
fn dimer_limit_is_bounded_above() {
    let lat = ThermoContext::lattice(lattice_moments(LatticeSpec::Hypercubic(2), 24, &SawConfig::default()).unwrap());
    let b = lat.lambda_upper_at_one(&[q(7, 10), q(4, 5)]).unwrap();
    // The square-lattice dimer entropy is Catalan's constant over pi.
    let dimer = 0.915_965_594_177_219 / std::f64::consts::PI;
    assert!(b.upper >= dimer && b.upper < 0.6, "{b:?}");
}
