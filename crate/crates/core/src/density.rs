//! Density views of matching measures: kernel smoothing of finite root measures,
//! Legendre projections from moments, the Kesten–McKay density of regular trees,
//! and exact atom probes.

use rug::{Float, Integer, Rational};

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::matching::{matching_counts, MatchingPolynomial, RootMeasure};
use crate::moments::MomentSequence;
use crate::poly::IntPoly;

#[derive(Clone, Debug)]
pub struct DensitySamples {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Simpson-rule integral of the samples.
    pub mass: f64,
    /// Set when some value is negative (possible for projections).
    pub has_negative: bool,
}

impl DensitySamples {
    fn from_fn(grid: Vec<f64>, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
        let mass = simpson(&grid, &values);
        let has_negative = values.iter().any(|&v| v < 0.0);
        DensitySamples { grid, values, mass, has_negative }
    }

    /// Two whitespace-separated columns `x value`, one row per grid point.
    pub fn to_dat(&self) -> String {
        self.grid.iter().zip(&self.values).map(|(x, v)| format!("{x:.6} {v:.8}\n")).collect()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Uniform grid of `n` points on `[a, b]` (odd `n` keeps Simpson exact on cubics).
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Composite Simpson on a uniform grid (trapezoid on a trailing odd panel).
fn simpson(x: &[f64], y: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let h = x[1] - x[0];
    let panels = x.len() - 1;
    let even = panels - panels % 2;
    let mut s = 0.0;
    for i in (0..even).step_by(2) {
        s += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    }
    if panels % 2 == 1 {
        s += h / 2.0 * (y[panels - 1] + y[panels]);
    }
    s
}

/// Triweight kernel `(35/32)(1 - u^2)^3` on `|u| <= 1`.
pub fn triweight(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - u * u;
        35.0 / 32.0 * w * w * w
    }
}

/// Rule-of-thumb bandwidth `1.06 σ n^(-1/5)`.
pub fn silverman_bandwidth(points: &[f64]) -> f64 {
    let n = points.len() as f64;
    if points.is_empty() {
        return 1.0;
    }
    let mean = points.iter().sum::<f64>() / n;
    let var = points.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let sigma = var.sqrt();
    if sigma == 0.0 {
        1.0
    } else {
        1.06 * sigma * n.powf(-0.2)
    }
}

/// Kernel density of the point masses `points` (each of weight `1/len`).
pub fn kernel_smooth_points(points: &[f64], h: f64, grid: Vec<f64>) -> Result<DensitySamples> {
    if !(h > 0.0) {
        return invalid(format!("bandwidth must be positive, got {h}"));
    }
    if points.is_empty() {
        return invalid("no points to smooth");
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let w = 1.0 / (points.len() as f64 * h);
    Ok(DensitySamples::from_fn(grid, |x| {
        // Only roots within h contribute.
        let a = sorted.partition_point(|&r| r <= x - h);
        let b = sorted.partition_point(|&r| r < x + h);
        sorted[a..b].iter().map(|&r| triweight((x - r) / h)).sum::<f64>() * w
    }))
}

/// Smoothed matching measure; `h = None` uses [`silverman_bandwidth`] and the grid
/// spans the roots plus one bandwidth on each side.
pub fn kernel_smooth(rm: &RootMeasure, h: Option<f64>, grid_size: usize) -> Result<DensitySamples> {
    let pts = rm.points_f64();
    let h = h.unwrap_or_else(|| silverman_bandwidth(&pts));
    let r = rm.max_abs().to_f64() + h;
    let n = grid_size | 1;
    kernel_smooth_points(&pts, h, uniform_grid(-r, r, n))
}

/// Monomial coefficients of the Legendre polynomials `P_0..P_N`.
pub fn legendre_coefficients(n: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = vec![vec![Rational::from(1)]];
    if n >= 1 {
        out.push(vec![Rational::new(), Rational::from(1)]);
    }
    for j in 1..n {
        // (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
        let mut next = vec![Rational::new(); j + 2];
        for (i, c) in out[j].iter().enumerate() {
            next[i + 1] += Rational::from(c * (2 * j as u32 + 1));
        }
        for (i, c) in out[j - 1].iter().enumerate() {
            next[i] -= Rational::from(c * j as u32);
        }
        for c in &mut next {
            *c /= j as u32 + 1;
        }
        out.push(next);
    }
    out
}

/// Legendre coefficients `a_j = ∫ P_j(x/R) dρ(x)` of a measure on `[-R, R]`,
/// `R^2 = radius_sq`, from its moments.
pub fn legendre_moments(mu: &MomentSequence, n: usize, radius_sq: &Rational, prec: u32) -> Result<Vec<f64>> {
    if n > mu.order() {
        return invalid(format!("projection degree {n} exceeds moment order {}", mu.order()));
    }
    let leg = legendre_coefficients(n);
    let r = Float::with_val(prec, radius_sq).sqrt();
    Ok(leg
        .iter()
        .map(|p| {
            // Even powers are exact: R^(2m) = U^m. Odd powers share one factor 1/R.
            let (mut even, mut odd) = (Rational::new(), Rational::new());
            let mut um = Rational::from(1);
            for (k, c) in p.iter().enumerate() {
                if k >= 2 && k % 2 == 0 {
                    um *= radius_sq;
                }
                let term = Rational::from(c * mu.mu(k)) / &um;
                if k % 2 == 0 {
                    even += term;
                } else {
                    odd += term;
                }
            }
            let v = Float::with_val(prec, &odd) / &r + &even;
            v.to_f64()
        })
        .collect())
}

fn legendre_eval(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![1.0; n + 1];
    if n >= 1 {
        p[1] = x;
    }
    for j in 1..n {
        p[j + 1] = ((2 * j + 1) as f64 * x * p[j] - j as f64 * p[j - 1]) / (j + 1) as f64;
    }
    p
}

/// Best `L^2([-R, R])` approximation of degree `N` to the density, from moments:
/// `Σ_j (2j+1)/(2R) a_j P_j(x/R)`.
pub fn l2_projection(mu: &MomentSequence, n: usize, radius_sq: &Rational, grid_size: usize) -> Result<DensitySamples> {
    if *radius_sq <= 0 {
        return invalid("projection radius must be positive");
    }
    let support = Rational::from(mu.support_radius_sq());
    if *radius_sq < support {
        return invalid(format!("R^2 = {radius_sq} is smaller than the support R^2 = {support}"));
    }
    let a = legendre_moments(mu, n, radius_sq, 256)?;
    let r = radius_sq.to_f64().sqrt();
    let grid = uniform_grid(-r, r, grid_size | 1);
    Ok(DensitySamples::from_fn(grid, |x| {
        let p = legendre_eval(n, (x / r).clamp(-1.0, 1.0));
        a.iter().enumerate().map(|(j, aj)| (2 * j + 1) as f64 / (2.0 * r) * aj * p[j]).sum()
    }))
}

/// Kesten–McKay density of the `d`-regular tree, `(d/2π) √(4(d-1) - x²) / (d² - x²)`.
pub fn bethe_density(d: usize, x: f64) -> f64 {
    if d < 2 {
        return 0.0;
    }
    let d = d as f64;
    let r2 = 4.0 * (d - 1.0);
    let s = r2 - x * x;
    // Points within rounding of the edge count as outside.
    if s <= r2 * 1e-14 {
        return 0.0;
    }
    d / (2.0 * std::f64::consts::PI) * s.sqrt() / (d * d - x * x)
}

/// `∫ bethe_density(d)` over its support, with `x = R sin θ` removing the endpoint
/// square roots (Simpson on `m` panels).
pub fn bethe_mass(d: usize, m: usize) -> f64 {
    let r = 2.0 * ((d as f64) - 1.0).sqrt();
    let half = std::f64::consts::FRAC_PI_2;
    let th = uniform_grid(-half, half, m | 1);
    let v: Vec<f64> = th.iter().map(|&t| bethe_density(d, r * t.sin()) * r * t.cos()).collect();
    simpson(&th, &v)
}

/// Multiplicity of `x` as a root of `mu(G, x)`.
pub fn root_multiplicity(p: &MatchingPolynomial, x: &Rational) -> usize {
    if *x == 0 {
        return p.n() - 2 * p.nu();
    }
    // ±x are roots of mu exactly as often as x^2 is a root of Q.
    let u = Rational::from(x * x);
    let (num, den) = u.into_numer_denom();
    let factor = IntPoly::new(vec![-num, den]);
    let mut q = p.reduced_poly();
    let mut mult = 0;
    while let Some(next) = q.div_exact(&factor) {
        if q.degree() == Some(0) {
            break;
        }
        q = next;
        mult += 1;
    }
    mult
}

/// `mult(G_n, x) / |G_n|` along a family of graphs.
pub fn atom_probe(family: &[Graph], x: &Rational) -> Result<Vec<Rational>> {
    let polys = family.iter().map(matching_counts).collect::<Result<Vec<_>>>()?;
    atom_probe_counts(&polys, x)
}

/// [`atom_probe`] on precomputed matching polynomials (e.g. from transfer matrices).
pub fn atom_probe_counts(family: &[MatchingPolynomial], x: &Rational) -> Result<Vec<Rational>> {
    family
        .iter()
        .map(|p| {
            if p.n() == 0 {
                return invalid("empty graph in atom probe");
            }
            Ok(Rational::from((Integer::from(root_multiplicity(p, x)), Integer::from(p.n()))))
        })
        .collect()
}
