//! Invariant suites over the built-in corpus, each reported as one line.

use std::time::Instant;

use mdim_core::approx::{minimax_fit, FitConfig, Target};
use mdim_core::corpus::{circulants, corpus, random_graphs};
use mdim_core::density::{bethe_mass, kernel_smooth};
use mdim_core::graph::{cycle, path, petersen, pyramid};
use mdim_core::matching::{
    derivative_identity_holds, finite_moments, godsil_ratio_check, isolate_roots, matching_counts,
};
use mdim_core::moments::support_radius_sq;
use mdim_core::reference::honeycomb_moments;
use mdim_core::saw::{average_finite_moments, lattice_moments, SawConfig};
use mdim_core::thermo::{darroch_bounds_check, ThermoContext};
use mdim_core::LatticeSpec;
use rug::Rational;

use crate::error::CliResult;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn(&SawConfig) -> CliResult<Result<String, String>>;

fn ok_if(cond: bool, pass: impl Into<String>, fail: impl Into<String>) -> Result<String, String> {
    if cond {
        Ok(pass.into())
    } else {
        Err(fail.into())
    }
}

fn derivative_identity(_: &SawConfig) -> CliResult<Result<String, String>> {
    for cg in corpus() {
        if !derivative_identity_holds(&cg.graph)? {
            return Ok(Err(format!("fails on {}", cg.name)));
        }
    }
    Ok(Ok("50 graphs".into()))
}

fn godsil(_: &SawConfig) -> CliResult<Result<String, String>> {
    let mut graphs = vec![
        ("pyramid".to_string(), pyramid()),
        ("C5".into(), cycle(5)?),
        ("P5".into(), path(5)),
        ("petersen".into(), petersen()),
    ];
    graphs.extend(random_graphs().into_iter().map(|c| (c.name, c.graph)));
    let mut checked = 0;
    for (name, g) in &graphs {
        for v in 0..g.n() {
            if !godsil_ratio_check(g, v, 10)? {
                return Ok(Err(format!("{name} vertex {v}")));
            }
            checked += 1;
        }
    }
    Ok(Ok(format!("{} graphs, {checked} roots, order 10", graphs.len())))
}

fn heilmann_lieb(_: &SawConfig) -> CliResult<Result<String, String>> {
    let eps = Rational::from((1, 1u64 << 24));
    for cg in corpus() {
        let p = matching_counts(&cg.graph)?;
        let rm = isolate_roots(&p, &eps)?;
        let total: usize = rm.roots.iter().map(|r| r.mult).sum();
        if total != cg.graph.n() {
            return Ok(Err(format!("{}: {total} of {} roots", cg.name, cg.graph.n())));
        }
        let bound = Rational::from(support_radius_sq(cg.graph.max_degree()));
        for r in &rm.roots {
            let inner = if r.lo >= 0 {
                r.lo.clone()
            } else if r.hi <= 0 {
                Rational::from(-&r.hi)
            } else {
                Rational::new()
            };
            if Rational::from(&inner * &inner) > bound {
                return Ok(Err(format!("{}: root in [{}, {}] outside the support", cg.name, r.lo, r.hi)));
            }
        }
    }
    Ok(Ok("all roots real and within 2 sqrt(D-1)".into()))
}

fn circulant_square_free(_: &SawConfig) -> CliResult<Result<String, String>> {
    let c = circulants(12);
    for cg in &c {
        if !matching_counts(&cg.graph)?.is_square_free() {
            return Ok(Err(format!("{} has a repeated root", cg.name)));
        }
    }
    Ok(Ok(format!("{} circulants on <= 12 vertices", c.len())))
}

fn saw_average(cfg: &SawConfig) -> CliResult<Result<String, String>> {
    for cg in corpus() {
        let direct = finite_moments(&matching_counts(&cg.graph)?, 12, cg.graph.max_degree());
        if average_finite_moments(&cg.graph, 12, cfg)?.moments() != direct.moments() {
            return Ok(Err(cg.name));
        }
    }
    Ok(Ok("50 graphs, K = 12".into()))
}

fn honeycomb_list(cfg: &SawConfig) -> CliResult<Result<String, String>> {
    let mu = lattice_moments(LatticeSpec::Honeycomb, 12, cfg)?;
    let stored = honeycomb_moments().truncate(12)?;
    Ok(ok_if(mu.moments() == stored.moments(), "K = 12 matches the stored list", "mismatch with the stored list"))
}

fn bethe_walks(cfg: &SawConfig) -> CliResult<Result<String, String>> {
    for d in 3..=5 {
        let ball = LatticeSpec::Bethe(d).ball(6)?;
        let walks = ball.graph.closed_walk_counts(ball.root, 12);
        if lattice_moments(LatticeSpec::Bethe(d), 12, cfg)?.integers() != Some(walks) {
            return Ok(Err(format!("bethe:{d}")));
        }
    }
    Ok(Ok("d = 3, 4, 5 to K = 12".into()))
}

fn lattice_invariants(cfg: &SawConfig) -> CliResult<Result<String, String>> {
    for (l, k) in [(LatticeSpec::Hypercubic(2), 16), (LatticeSpec::Hypercubic(3), 12), (LatticeSpec::Honeycomb, 16)] {
        let bad = lattice_moments(l, k, cfg)?.invariant_violations();
        if !bad.is_empty() {
            return Ok(Err(format!("{l}: {}", bad.join("; "))));
        }
    }
    Ok(Ok("z2, z3, hex".into()))
}

fn darroch(_: &SawConfig) -> CliResult<Result<String, String>> {
    for cg in corpus() {
        for k in 1..=matching_counts(&cg.graph)?.nu() {
            if !darroch_bounds_check(&cg.graph, k)? {
                return Ok(Err(format!("{} k = {k}", cg.name)));
            }
        }
    }
    Ok(Ok("50 graphs".into()))
}

fn disjoint_union(_: &SawConfig) -> CliResult<Result<String, String>> {
    let g = pyramid();
    let one = ThermoContext::finite(&g)?;
    for k in 2..=3 {
        let many = ThermoContext::finite(&g.copies(k))?;
        for t in [Rational::from((1, 2)), Rational::from(1), Rational::from(3)] {
            if many.pressure(&t)?.exact != one.pressure(&t)?.exact {
                return Ok(Err(format!("{k} copies, t = {t}")));
            }
        }
    }
    Ok(Ok("pyramid, up to 3 copies".into()))
}

fn fit_soundness(_: &SawConfig) -> CliResult<Result<String, String>> {
    let pa = minimax_fit(Target::HalfLog, &Rational::from(1), &Rational::from(12), 8, &FitConfig::default())?;
    let r = 12f64.sqrt();
    let worst = (0..=4000)
        .map(|i| {
            let z = -r + 2.0 * r * i as f64 / 4000.0;
            (0.5 * (z * z).ln_1p() - pa.eval_f64(z)).abs()
        })
        .fold(0.0, f64::max);
    Ok(ok_if(
        worst <= pa.eps,
        format!("sampled {worst:.3e} <= certified {:.3e}", pa.eps),
        format!("sampled {worst:e} > {:e}", pa.eps),
    ))
}

fn kernel_mass(_: &SawConfig) -> CliResult<Result<String, String>> {
    let rm = isolate_roots(&matching_counts(&petersen())?, &Rational::from((1, 1u64 << 30)))?;
    let m = kernel_smooth(&rm, None, 4001)?.mass;
    let b = bethe_mass(4, 2001);
    Ok(ok_if(
        (m - 1.0).abs() <= 1e-6 && (b - 1.0).abs() <= 1e-8,
        format!("kernel {m:.9}, Kesten-McKay {b:.9}"),
        format!("kernel {m}, Kesten-McKay {b}"),
    ))
}

const CHECKS: [(&str, Check); 12] = [
    ("matching-engine/derivative-identity", derivative_identity),
    ("matching-engine/godsil-series", godsil),
    ("matching-engine/real-bounded-roots", heilmann_lieb),
    ("matching-engine/circulants-square-free", circulant_square_free),
    ("saw-walker/expected-moments", saw_average),
    ("saw-walker/honeycomb-list", honeycomb_list),
    ("saw-walker/bethe-walks", bethe_walks),
    ("measure-calculus/moment-invariants", lattice_invariants),
    ("measure-calculus/darroch-bounds", darroch),
    ("measure-calculus/disjoint-union", disjoint_union),
    ("approximator/soundness", fit_soundness),
    ("density-tools/unit-mass", kernel_mass),
];

/// Runs every suite; errors inside a suite count as failures.
pub fn run_selftest(cfg: &SawConfig) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|&(id, check)| {
            let start = Instant::now();
            let (passed, detail) = match check(cfg) {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(e) => (false, e.to_string()),
            };
            CheckResult { id, passed, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

pub fn report(results: &[CheckResult]) -> String {
    results
        .iter()
        .map(|r| format!("{} {} ({}; {:.2}s)\n", if r.passed { "PASS" } else { "FAIL" }, r.id, r.detail, r.seconds))
        .collect()
}
