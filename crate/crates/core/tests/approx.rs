//! Soundness and consistency of the certified polynomial fits.

use mdim_core::approx::{certify_error, integrate_against_moments, minimax_fit, FitConfig, PolyApprox, Target};
use mdim_core::graph::cycle;
use mdim_core::matching::{finite_moments, matching_counts};
use mdim_core::moments::{MomentSequence, MomentSource};
use mdim_core::reference::honeycomb_moments;
use mdim_core::saw::{lattice_moments, SawConfig};
use mdim_core::LatticeSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};

fn r(n: i64) -> Rational {
    Rational::from(n)
}

fn target_f64(target: Target, t: f64, z: f64) -> f64 {
    let u = z * z;
    match target {
        Target::HalfLog => 0.5 * (t * u).ln_1p(),
        Target::RationalPressure => t * u / (1.0 + t * u),
    }
}

/// `q(z)` with 200-bit arithmetic so cancellation in the monomial form is harmless.
fn eval_precise(pa: &PolyApprox, z: f64) -> f64 {
    let u = Float::with_val(200, z) * z;
    let mut acc = Float::with_val(200, 0);
    for a in pa.u_coeffs.iter().rev() {
        acc *= &u;
        acc += Float::with_val(200, a);
    }
    acc.to_f64()
}

#[test]
fn certified_bounds_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cases = [
        (Target::HalfLog, r(1), r(12), 8),
        (Target::HalfLog, r(1), r(12), 32),
        (Target::HalfLog, r(1), r(8), 48),
        (Target::RationalPressure, r(2), r(8), 20),
        (Target::RationalPressure, Rational::from((1, 3)), r(20), 24),
    ];
    for (target, t, u, n) in cases {
        let pa = minimax_fit(target, &t, &u, n, &FitConfig::default()).unwrap();
        assert!(pa.eps >= pa.remez_residual);
        let rad = u.to_f64().sqrt();
        let tf = t.to_f64();
        let mut worst: f64 = 0.0;
        for i in 0..100_000 {
            // Include the endpoints, where the error peaks.
            let z = match i {
                0 => rad,
                1 => 0.0,
                _ => rng.gen_range(-rad..=rad),
            };
            worst = worst.max((target_f64(target, tf, z) - eval_precise(&pa, z)).abs());
        }
        assert!(worst <= pa.eps, "{target} N={n}: observed {worst:e} > certified {:e}", pa.eps);
        assert!(worst >= 0.9 * pa.eps, "{target} N={n}: certified {:e} is loose against {worst:e}", pa.eps);
    }
}

#[test]
fn error_decreases_with_degree() {
    for target in [Target::HalfLog, Target::RationalPressure] {
        let e: Vec<f64> = (0..=32)
            .step_by(4)
            .map(|n| minimax_fit(target, &r(1), &r(12), n, &FitConfig::default()).unwrap().eps)
            .collect();
        assert!(e.windows(2).all(|w| w[1] <= w[0]), "{target}: {e:?}");
    }
}

#[test]
fn reference_examples() {
    let cfg = FitConfig::default();
    let c = minimax_fit(Target::HalfLog, &r(1), &r(12), 0, &cfg).unwrap();
    assert!((c.eps - 13f64.ln() / 4.0).abs() < 1e-3);
    let zero = PolyApprox::from_u_coeffs(Target::HalfLog, r(1), r(12), vec![Rational::new()]);
    let e0 = certify_error(&zero, &cfg).unwrap();
    assert!(e0 >= 13f64.ln() / 2.0 && e0 <= 13f64.ln() / 2.0 * (1.0 + 1e-3));
    let two = minimax_fit(Target::HalfLog, &r(1), &r(12), 2, &cfg).unwrap();
    assert!(two.eps < c.eps);
    let hex = minimax_fit(Target::HalfLog, &r(1), &r(8), 44, &cfg).unwrap();
    assert!(hex.eps <= 1e-6 && hex.eps <= 2.0 * hex.remez_residual, "{} {}", hex.eps, hex.remez_residual);
}

#[test]
fn fits_are_even_and_use_even_moments() {
    let pa = minimax_fit(Target::HalfLog, &r(1), &r(8), 12, &FitConfig::default()).unwrap();
    let z = pa.z_coeffs();
    assert!(z.iter().skip(1).step_by(2).all(|c| *c == 0));
    let hex = honeycomb_moments().truncate(12).unwrap();
    let mut skewed: Vec<Rational> = hex.moments().to_vec();
    for k in (1..skewed.len()).step_by(2) {
        skewed[k] = Rational::from(k as i64 * 1000);
    }
    let skewed = MomentSequence::new(skewed, 3, MomentSource::Ingested { provenance: "skewed".into() }).unwrap();
    assert_eq!(
        integrate_against_moments(&pa, &hex).unwrap().value,
        integrate_against_moments(&pa, &skewed).unwrap().value
    );
}

#[test]
fn integration_examples() {
    let z2 = lattice_moments(LatticeSpec::Hypercubic(2), 8, &SawConfig::default()).unwrap();
    let mut square = PolyApprox::from_u_coeffs(Target::HalfLog, r(1), r(12), vec![r(0), r(1)]);
    square.eps = 0.0;
    assert_eq!(integrate_against_moments(&square, &z2).unwrap().value, 4.0);
    let mut one = PolyApprox::from_u_coeffs(Target::HalfLog, r(1), r(12), vec![r(1)]);
    one.eps = 0.0;
    assert_eq!(integrate_against_moments(&one, &z2).unwrap().value, 1.0);
    // Fitted on too small an interval, or beyond the available order.
    one.radius_sq = r(8);
    assert!(integrate_against_moments(&one, &z2).is_err());
    let deep = minimax_fit(Target::HalfLog, &r(1), &r(12), 10, &FitConfig::default()).unwrap();
    assert!(integrate_against_moments(&deep, &z2).is_err());
}

#[test]
fn finite_measure_agrees_with_exact_log() {
    // C6: m = [1, 6, 9, 2], M(1) = 18.
    let p = matching_counts(&cycle(6).unwrap()).unwrap();
    let exact = 18f64.ln() / 6.0;
    for k in [8usize, 16, 24] {
        let mu = finite_moments(&p, k, 2);
        let pa = minimax_fit(Target::HalfLog, &r(1), &r(4), k, &FitConfig::default()).unwrap();
        let v = integrate_against_moments(&pa, &mu).unwrap();
        assert!((v.value - exact).abs() <= v.eps, "K={k}: {} vs {exact} (eps {:e})", v.value, v.eps);
    }
}
