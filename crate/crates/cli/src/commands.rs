//! The `moments`, `finite`, `thermo`, `approx` and `density` subcommands.

use std::path::PathBuf;

use mdim_core::approx::{minimax_fit, FitConfig, Target};
use mdim_core::density::{bethe_density, kernel_smooth, l2_projection, uniform_grid, DensitySamples};
use mdim_core::interval::CertifiedValue;
use mdim_core::matching::{finite_moments, isolate_roots};
use mdim_core::moments::support_radius_sq;
use mdim_core::thermo::{Inversion, ThermoContext};
use mdim_core::{LatticeSpec, MomentSequence};
use rug::Rational;
use serde_json::{json, Value};

use crate::error::{input, CliResult, Failure};
use crate::job::{emit, emit_json, Globals, JobSpec};
use crate::sources::{parse_graph, MomentArgs};

fn moments_json(mu: &MomentSequence) -> CliResult<Value> {
    let mut v = mu.to_json_value();
    v["invariant_violations"] = json!(mu.invariant_violations());
    Ok(v)
}

fn check_invariants(mu: &MomentSequence) -> CliResult<()> {
    let bad = mu.invariant_violations();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(bad.join("; ")))
    }
}

/// `mdim moments`: exact moments of a lattice, or of a finite graph's matching measure.
pub fn moments(g: &Globals, lattice: Option<LatticeSpec>, graph: Option<&str>, max_order: usize) -> CliResult<()> {
    let (mu, source) = match (lattice, graph) {
        (Some(l), None) => (mdim_core::saw::lattice_moments(l, max_order, &g.saw_config())?, format!("lattice {l}")),
        (None, Some(spec)) => {
            let f = parse_graph(spec)?;
            (finite_moments(&f.poly, max_order, f.degree_bound()), format!("graph {spec}"))
        }
        _ => return input("give exactly one of --lattice or --graph"),
    };
    let mut job = JobSpec::new("moments", source, g);
    job.order = Some(max_order);
    emit_json(g, &job, moments_json(&mu)?)?;
    check_invariants(&mu)
}

/// `mdim finite`: matching counts, moments, roots and exact thermodynamics of a graph.
pub fn finite(g: &Globals, spec: &str, max_order: usize, roots: Option<u32>) -> CliResult<()> {
    let f = parse_graph(spec)?;
    let mu = finite_moments(&f.poly, max_order, f.degree_bound());
    let ctx = ThermoContext::from_polynomial(f.poly.clone(), f.degree_bound()).with_precision(g.precision_bits);
    let mut job = JobSpec::new("finite", format!("graph {spec}"), g);
    job.order = Some(max_order);
    let mut body = json!({
        "n": f.graph.n(),
        "edges": f.graph.edge_count(),
        "max_degree": f.degree_bound(),
        "matching_counts": f.poly.counts().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "nu": f.poly.nu(),
        "p_star": ctx.p_star().to_string(),
        "square_free": f.poly.is_square_free(),
        "free_energy": ctx.free_energy()?,
        "pressure_at_1": ctx.pressure(&Rational::from(1))?,
        "moments": moments_json(&mu)?,
    });
    if let Some(bits) = roots {
        job = job.option("root_precision_bits", bits);
        let rm = isolate_roots(&f.poly, &Rational::from((1, rug::Integer::from(1) << bits)))?;
        body["roots"] = rm
            .roots
            .iter()
            .map(|r| json!({"lo": r.lo.to_string(), "hi": r.hi.to_string(), "mid": r.midpoint().to_f64(), "mult": r.mult}))
            .collect();
    }
    emit_json(g, &job, body)?;
    check_invariants(&mu)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Quantity {
    /// F(t) = ln M(t) / n per site (lattices: ∫ ½ ln(1 + t z²) dρ).
    FreeEnergy,
    /// Dimer density p(t).
    Pressure,
    /// Entropy λ(p) at fixed density.
    Lambda,
    /// Inverse activity t(p).
    Activity,
    /// One-sided upper bound on λ at full density (lattices).
    LambdaMax,
}

fn inversion_json(p: &Rational, inv: &Inversion) -> Value {
    json!({
        "p": p.to_string(),
        "t": inv.t(),
        "t_lo": inv.t_lo.to_string(),
        "t_hi": inv.t_hi.to_string(),
        "width": inv.width(),
        "p_at_lo": inv.p_at_lo,
        "p_at_hi": inv.p_at_hi,
        "converged": inv.converged,
    })
}

pub struct ThermoArgs {
    pub source: MomentArgs,
    pub graph: Option<String>,
    pub quantity: Quantity,
    pub t: Vec<Rational>,
    pub p: Vec<Rational>,
    pub degree: Option<usize>,
}

/// `mdim thermo`: certified thermodynamic quantities.
pub fn thermo(g: &Globals, a: &ThermoArgs) -> CliResult<()> {
    let (mut ctx, source) = match &a.graph {
        Some(spec) => {
            let f = parse_graph(spec)?;
            let d = f.degree_bound();
            (ThermoContext::from_polynomial(f.poly, d), format!("graph {spec}"))
        }
        None => (ThermoContext::lattice(a.source.resolve(&g.saw_config())?), a.source.describe()),
    };
    if let Some(n) = a.degree {
        ctx = ctx.with_fit_degree(n)?;
    }
    ctx = ctx.with_precision(g.precision_bits);
    let mut job = JobSpec::new("thermo", source, g).option("quantity", format!("{:?}", a.quantity));
    if let ThermoContext::Lattice { mu, fit_degree, .. } = &ctx {
        job.order = Some(mu.order());
        job.degree = Some(*fit_degree);
    }
    let ts = if a.t.is_empty() { vec![Rational::from(1)] } else { a.t.clone() };
    let results: Vec<Value> = match a.quantity {
        Quantity::FreeEnergy | Quantity::Pressure => {
            job.t = ts.iter().map(|t| t.to_string()).collect();
            ts.iter()
                .map(|t| {
                    let v = if a.quantity == Quantity::Pressure { ctx.pressure(t)? } else { ctx.free_energy_at(t)? };
                    Ok(json!({"t": t.to_string(), "value": v}))
                })
                .collect::<CliResult<_>>()?
        }
        Quantity::Lambda | Quantity::Activity => {
            if a.p.is_empty() {
                return input("--quantity lambda/activity needs --p");
            }
            job.p = a.p.iter().map(|p| p.to_string()).collect();
            a.p.iter()
                .map(|p| {
                    if a.quantity == Quantity::Lambda {
                        let v: CertifiedValue = ctx.lambda_of_p(p)?;
                        Ok(json!({"p": p.to_string(), "value": v}))
                    } else {
                        Ok(inversion_json(p, &ctx.invert_pressure(p)?))
                    }
                })
                .collect::<CliResult<_>>()?
        }
        Quantity::LambdaMax => {
            let grid: Vec<Rational> =
                if a.p.is_empty() { (6..10).map(|i| Rational::from((i, 10))).collect() } else { a.p.clone() };
            job.p = grid.iter().map(|p| p.to_string()).collect();
            vec![serde_json::to_value(ctx.lambda_upper_at_one(&grid)?)?]
        }
    };
    emit_json(g, &job, json!({ "quantity": format!("{:?}", a.quantity), "results": results }))
}

pub struct ApproxArgs {
    pub target: Target,
    pub t: Rational,
    pub radius_sq: Rational,
    pub degree: usize,
    pub emit: Option<PathBuf>,
}

/// `mdim approx`: certified near-minimax even polynomial fit.
pub fn approx(g: &Globals, a: &ApproxArgs) -> CliResult<()> {
    let cfg = FitConfig { precision_bits: g.precision_bits, ..FitConfig::default() };
    let pa = minimax_fit(a.target, &a.t, &a.radius_sq, a.degree, &cfg)?;
    let mut job = JobSpec::new("approx", format!("{} on R^2 = {}", a.target, a.radius_sq), g);
    job.t = vec![a.t.to_string()];
    job.degree = Some(a.degree);
    let body = pa.to_json_value();
    match &a.emit {
        Some(path) => {
            job = job.option("emit", path.display());
            std::fs::write(path, serde_json::to_string_pretty(&job.wrap(body))? + "\n")?;
            emit(g, &format!("degree {} eps {:.6e} remez residual {:.6e}\n", a.degree, pa.eps, pa.remez_residual))
        }
        None => emit_json(g, &job, body),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum DensityMode {
    /// Triweight-smoothed root measure of a finite graph.
    Kernel,
    /// Legendre projection of a moment sequence.
    L2,
    /// Closed-form density of a regular tree.
    Bethe,
}

pub struct DensityArgs {
    pub mode: DensityMode,
    pub graph: Option<String>,
    pub source: MomentArgs,
    pub bandwidth: Option<f64>,
    pub degree: Option<usize>,
    pub radius_sq: Option<Rational>,
    pub grid: usize,
}

fn dat(job: &JobSpec, d: &DensitySamples) -> String {
    let mut s = job.header();
    s += &format!("# mass {:.12} has_negative {}\n", d.mass, d.has_negative);
    s + &d.to_dat()
}

/// `mdim density`: two-column `.dat` output.
pub fn density(g: &Globals, a: &DensityArgs) -> CliResult<()> {
    let (job, d) = match a.mode {
        DensityMode::Kernel => {
            let spec = a.graph.as_deref().ok_or_else(|| Failure::Input("kernel mode needs --graph".into()))?;
            let f = parse_graph(spec)?;
            let rm = isolate_roots(&f.poly, &Rational::from((1, 1u64 << 40)))?;
            let d = kernel_smooth(&rm, a.bandwidth, a.grid)?;
            let h = match a.bandwidth {
                Some(h) => h,
                None => mdim_core::density::silverman_bandwidth(&rm.points_f64()),
            };
            let job = JobSpec::new("density", format!("graph {spec}"), g)
                .option("mode", "kernel")
                .option("bandwidth", h)
                .option("grid", a.grid);
            if (d.mass - 1.0).abs() > 1e-6 {
                emit(g, &dat(&job, &d))?;
                return Err(Failure::Invariant(format!("kernel mass {} is not 1", d.mass)));
            }
            (job, d)
        }
        DensityMode::L2 => {
            let mu = a.source.resolve(&g.saw_config())?;
            let n = a.degree.unwrap_or(mu.order());
            let r2 = a.radius_sq.clone().unwrap_or_else(|| Rational::from(mu.support_radius_sq()));
            let d = l2_projection(&mu, n, &r2, a.grid)?;
            let mut job = JobSpec::new("density", a.source.describe(), g)
                .option("mode", "l2")
                .option("radius_sq", &r2)
                .option("grid", a.grid);
            job.order = Some(mu.order());
            job.degree = Some(n);
            (job, d)
        }
        DensityMode::Bethe => {
            let Some(LatticeSpec::Bethe(deg)) = a.source.lattice else {
                return input("bethe mode needs --lattice bethe:<d>");
            };
            let r = Rational::from(support_radius_sq(deg)).to_f64().sqrt();
            let grid = uniform_grid(-r, r, a.grid | 1);
            let values: Vec<f64> = grid.iter().map(|&x| bethe_density(deg, x)).collect();
            let mass = mdim_core::density::bethe_mass(deg, a.grid);
            let d = DensitySamples { grid, values, mass, has_negative: false };
            (
                JobSpec::new("density", format!("lattice bethe:{deg}"), g)
                    .option("mode", "bethe")
                    .option("grid", a.grid),
                d,
            )
        }
    };
    emit(g, &dat(&job, &d))
}
