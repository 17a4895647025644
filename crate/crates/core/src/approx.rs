//! Polynomial approximation of the monomer-dimer integrands on `[-R, R]` with
//! certified sup-norm error, and integration against moment sequences.
//!
//! Both integrands are even in `z`, so fitting happens in `u = z^2` on `[0, U]`,
//! `U = R^2`: `½ ln(1 + t u)` and `t u / (1 + t u)`. A Remez exchange in f64 on the
//! Chebyshev basis produces the candidate; its coefficients are then treated as exact
//! dyadic rationals and the error is bounded rigorously with MPFR intervals.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde_json::json;

use crate::error::{invalid, Error, Result};
use crate::interval::{f64_up, CertifiedValue, Interval};
use crate::moments::MomentSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    /// `½ ln(1 + t z^2)`.
    HalfLog,
    /// `t z^2 / (1 + t z^2)`.
    RationalPressure,
}

impl Target {
    fn eval_f64(self, t: f64, u: f64) -> f64 {
        match self {
            Target::HalfLog => 0.5 * (t * u).ln_1p(),
            Target::RationalPressure => t * u / (1.0 + t * u),
        }
    }

    /// Interval enclosure of the target at `u`.
    pub fn eval_interval(self, t: &Rational, u: &Rational, prec: u32) -> Result<Interval> {
        let tu = Rational::from(t * u);
        let one_tu = Rational::from(&tu + 1u32);
        match self {
            Target::HalfLog => Ok(Interval::from_rational(&one_tu, prec).ln()?.scale(&Rational::from((1, 2)))),
            Target::RationalPressure => Ok(Interval::from_rational(&(tu / one_tu), prec)),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::HalfLog => "halflog",
            Target::RationalPressure => "pressure",
        })
    }
}

impl FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "halflog" | "half_log" | "log" => Ok(Target::HalfLog),
            "pressure" | "rational_pressure" => Ok(Target::RationalPressure),
            _ => invalid(format!("unknown target {s:?} (expected halflog or pressure)")),
        }
    }
}

/// A polynomial `q(z) = sum c_k z^k` with `|f(z) - q(z)| <= eps` on `[-R, R]`.
#[derive(Clone, Debug)]
pub struct PolyApprox {
    pub target: Target,
    pub t: Rational,
    /// `U = R^2`.
    pub radius_sq: Rational,
    /// Exact coefficients in `u = z^2`, lowest first.
    pub u_coeffs: Vec<Rational>,
    /// Certified sup-norm error over the interval.
    pub eps: f64,
    /// Levelled error of the final Remez reference (f64 estimate).
    pub remez_residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct FitConfig {
    pub precision_bits: u32,
    /// Relative equioscillation defect at which the exchange stops.
    pub remez_tolerance: f64,
    pub max_iterations: usize,
    /// Relative slack the certification may add on top of the observed error.
    pub certify_slack: f64,
    pub max_cells: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            precision_bits: crate::interval::DEFAULT_PRECISION,
            remez_tolerance: 1e-3,
            max_iterations: 60,
            certify_slack: 1e-3,
            max_cells: 1 << 20,
        }
    }
}

impl PolyApprox {
    /// Degree `N` in `z`.
    pub fn degree(&self) -> usize {
        2 * self.u_coeffs.len().saturating_sub(1)
    }

    /// Coefficients `c_0..c_N` in `z`; odd ones are exactly zero.
    pub fn z_coeffs(&self) -> Vec<Rational> {
        let mut out = vec![Rational::new(); self.degree() + 1];
        for (k, a) in self.u_coeffs.iter().enumerate() {
            out[2 * k] = a.clone();
        }
        out
    }

    pub fn eval_u(&self, u: &Rational) -> Rational {
        let mut acc = Rational::new();
        for a in self.u_coeffs.iter().rev() {
            acc *= u;
            acc += a;
        }
        acc
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        let u = z * z;
        self.u_coeffs.iter().rev().fold(0.0, |acc, a| acc * u + a.to_f64())
    }

    /// Unfitted candidate (eps is filled in by [`certify_error`]).
    pub fn from_u_coeffs(target: Target, t: Rational, radius_sq: Rational, u_coeffs: Vec<Rational>) -> Self {
        PolyApprox {
            target,
            t,
            radius_sq,
            u_coeffs,
            eps: f64::INFINITY,
            remez_residual: f64::NAN,
            converged: false,
            iterations: 0,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "target": self.target.to_string(),
            "t": self.t.to_string(),
            "radius_sq": self.radius_sq.to_string(),
            "degree": self.degree(),
            "coeffs": self.z_coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "coeffs_f64": self.z_coeffs().iter().map(|c| c.to_f64()).collect::<Vec<_>>(),
            "eps": self.eps,
            "remez_residual": self.remez_residual,
            "converged": self.converged,
            "iterations": self.iterations,
        })
    }
}

// ---------------------------------------------------------------------------
// Remez exchange in f64

fn cheb_eval(b: &[f64], s: f64) -> f64 {
    // Clenshaw recurrence.
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in b.iter().skip(1).rev() {
        let b0 = 2.0 * s * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    s * b1 - b2 + b.first().copied().unwrap_or(0.0)
}

fn cheb_t(j: usize, s: f64) -> f64 {
    let (mut a, mut b) = (1.0, s);
    if j == 0 {
        return 1.0;
    }
    for _ in 1..j {
        let c = 2.0 * s * b - a;
        a = b;
        b = c;
    }
    b
}

fn solve(mut a: Vec<Vec<f64>>, mut y: Vec<f64>) -> Option<Vec<f64>> {
    let n = y.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        y.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            if f != 0.0 {
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                y[r] -= f * y[c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (y[r] - s) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

struct RemezResult {
    cheb: Vec<f64>,
    residual: f64,
    converged: bool,
    iterations: usize,
}

/// Chebyshev interpolant at the first-kind nodes (fallback).
fn cheb_interpolant(f: &dyn Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let m = n + 1;
    let nodes: Vec<f64> = (0..m).map(|k| (std::f64::consts::PI * (k as f64 + 0.5) / m as f64).cos()).collect();
    let vals: Vec<f64> = nodes.iter().map(|&s| f(s)).collect();
    (0..m)
        .map(|j| {
            let c: f64 = nodes.iter().zip(&vals).map(|(&s, &v)| v * cheb_t(j, s)).sum::<f64>() * 2.0 / m as f64;
            if j == 0 {
                c / 2.0
            } else {
                c
            }
        })
        .collect()
}

/// Local maximiser of `|e|` near `s` by golden-section search on `[a, b]`.
fn refine_extremum(e: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (e(x1).abs(), e(x2).abs());
    for _ in 0..40 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = e(x1).abs();
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = e(x2).abs();
        }
    }
    0.5 * (a + b)
}

fn remez(f: &dyn Fn(f64) -> f64, n: usize, cfg: &FitConfig) -> RemezResult {
    let m = n + 2;
    let mut refs: Vec<f64> = (0..m).map(|i| -(std::f64::consts::PI * i as f64 / (m - 1) as f64).cos()).collect();
    let grid_n = (64 * m).max(2001);
    let grid: Vec<f64> = (0..grid_n).map(|k| -(std::f64::consts::PI * k as f64 / (grid_n - 1) as f64).cos()).collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for it in 1..=cfg.max_iterations {
        let a: Vec<Vec<f64>> = refs
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let mut row: Vec<f64> = (0..=n).map(|j| cheb_t(j, s)).collect();
                row.push(if i % 2 == 0 { 1.0 } else { -1.0 });
                row
            })
            .collect();
        let y: Vec<f64> = refs.iter().map(|&s| f(s)).collect();
        let Some(x) = solve(a, y) else { break };
        let b = x[..=n].to_vec();
        let level = x[n + 1].abs();
        let err = |s: f64| f(s) - cheb_eval(&b, s);
        let ev: Vec<f64> = grid.iter().map(|&s| err(s)).collect();

        // One extremum per run of constant sign.
        let mut ext: Vec<(f64, f64)> = Vec::new();
        let mut k = 0;
        while k < grid_n {
            let sign = ev[k] >= 0.0;
            let mut best_k = k;
            let mut j = k;
            while j < grid_n && (ev[j] >= 0.0) == sign {
                if ev[j].abs() > ev[best_k].abs() {
                    best_k = j;
                }
                j += 1;
            }
            let lo = grid[best_k.saturating_sub(1)];
            let hi = grid[(best_k + 1).min(grid_n - 1)];
            let s = if best_k == 0 || best_k == grid_n - 1 { grid[best_k] } else { refine_extremum(&err, lo, hi) };
            ext.push((s, err(s)));
            k = j;
        }
        let max_err =
            ext.iter().map(|e| e.1.abs()).fold(0.0, f64::max).max(ev.iter().map(|v| v.abs()).fold(0.0, f64::max));
        if best.as_ref().map_or(true, |(_, e)| max_err < *e) {
            best = Some((b.clone(), max_err));
        }
        if ext.len() < m {
            break;
        }
        while ext.len() > m {
            if ext[0].1.abs() < ext[ext.len() - 1].1.abs() {
                ext.remove(0);
            } else {
                ext.pop();
            }
        }
        let mags: Vec<f64> = ext.iter().map(|e| e.1.abs()).collect();
        let hi = mags.iter().copied().fold(0.0, f64::max);
        let lo = mags.iter().copied().fold(f64::INFINITY, f64::min);
        refs = ext.iter().map(|e| e.0).collect();
        if hi == 0.0 || (hi - lo) / hi < cfg.remez_tolerance {
            return RemezResult { cheb: b, residual: level.max(lo), converged: true, iterations: it };
        }
    }
    log::warn!("Remez exchange did not converge at degree {n}; using the best iterate or Chebyshev interpolation");
    let interp = cheb_interpolant(f, n);
    let interp_err = grid.iter().map(|&s| (f(s) - cheb_eval(&interp, s)).abs()).fold(0.0, f64::max);
    match best {
        Some((b, e)) if e <= interp_err => {
            RemezResult { cheb: b, residual: e, converged: false, iterations: cfg.max_iterations }
        }
        _ => RemezResult { cheb: interp, residual: interp_err, converged: false, iterations: cfg.max_iterations },
    }
}

/// Exact monomial coefficients in `u` of `sum b_j T_j(2u/U - 1)`.
fn cheb_to_u_monomial(b: &[f64], u_max: &Rational) -> Vec<Rational> {
    let n = b.len();
    // Monomial coefficients of T_j in s.
    let mut t_prev: Vec<Integer> = vec![Integer::from(1)];
    let mut t_cur: Vec<Integer> = vec![Integer::new(), Integer::from(1)];
    let mut p_s: Vec<Rational> = vec![Rational::new(); n];
    for (j, bj) in b.iter().enumerate() {
        let bj = Rational::from_f64(*bj).expect("finite coefficient");
        let tj = match j {
            0 => &t_prev,
            1 => &t_cur,
            _ => {
                let mut next = vec![Integer::new(); j + 1];
                for (i, c) in t_cur.iter().enumerate() {
                    next[i + 1] += Integer::from(c * 2u32);
                }
                for (i, c) in t_prev.iter().enumerate() {
                    next[i] -= c;
                }
                t_prev = std::mem::replace(&mut t_cur, next);
                &t_cur
            }
        };
        for (i, c) in tj.iter().enumerate() {
            p_s[i] += Rational::from(&bj * c);
        }
    }
    // Substitute s = alpha u - 1 by Horner on polynomials.
    let alpha = Rational::from(2u32) / u_max.clone();
    let mut acc: Vec<Rational> = Vec::new();
    for c in p_s.iter().rev() {
        // acc <- acc * (alpha u - 1) + c
        let mut next = vec![Rational::new(); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i + 1] += Rational::from(a * &alpha);
            next[i] -= a;
        }
        next[0] += c;
        acc = next;
    }
    while acc.len() > 1 && acc.last().is_some_and(|c| *c == 0) {
        acc.pop();
    }
    acc
}

/// Near-minimax fit of degree `n_z` (in `z`) to `target` on `[-R, R]`, `R^2 = radius_sq`,
/// with certified error.
pub fn minimax_fit(
    target: Target,
    t: &Rational,
    radius_sq: &Rational,
    n_z: usize,
    cfg: &FitConfig,
) -> Result<PolyApprox> {
    if *t < 0 {
        return invalid("activity t must be nonnegative");
    }
    if *radius_sq <= 0 {
        return invalid("interval radius must be positive");
    }
    let n = n_z / 2;
    let tf = t.to_f64();
    let uf = radius_sq.to_f64();
    let f = move |s: f64| target.eval_f64(tf, (s + 1.0) * 0.5 * uf);
    let r = if *t == 0 {
        RemezResult { cheb: vec![0.0], residual: 0.0, converged: true, iterations: 0 }
    } else {
        remez(&f, n, cfg)
    };
    let mut pa =
        PolyApprox::from_u_coeffs(target, t.clone(), radius_sq.clone(), cheb_to_u_monomial(&r.cheb, radius_sq));
    pa.remez_residual = r.residual;
    pa.converged = r.converged;
    pa.iterations = r.iterations;
    pa.eps = certify_error(&pa, cfg)?;
    Ok(pa)
}

// ---------------------------------------------------------------------------
// Certification

/// Taylor order used for the target; the polynomial is expanded fully.
const TAYLOR_ORDER: usize = 8;

struct CellBound {
    upper: Float,
    /// Lower bound on `|f - q|` at the cell midpoint.
    lower: Float,
    /// Width of the midpoint residual enclosure, for precision control.
    width: Float,
}

/// Target Taylor coefficients `f_0..f_T` at `m`.
fn target_taylor(target: Target, t: &Rational, m: &Rational, order: usize, prec: u32) -> Result<Vec<Interval>> {
    let one_tm = Rational::from(Rational::from(t * m) + 1u32);
    let q = Interval::from_rational(&Rational::from(t / &one_tm), prec);
    let mut out = vec![target.eval_interval(t, m, prec)?];
    let mut qk = Interval::from_f64(1.0, prec);
    for k in 1..=order {
        qk = qk.mul(&q);
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let c = match target {
            Target::HalfLog => qk.scale(&Rational::from((1, 2 * k as u64))),
            Target::RationalPressure => qk.div(&Interval::from_rational(&one_tm, prec))?,
        };
        out.push(if sign > 0 { c } else { c.neg() });
    }
    Ok(out)
}

/// Bound on `sup |f^(T+1)| / (T+1)!` over `[a, ...)`; attained at the left end.
fn target_remainder_coeff(target: Target, t: &Rational, a: &Rational, order: usize, prec: u32) -> Result<Interval> {
    let k = order as u32 + 1;
    let one_ta = Rational::from(Rational::from(t * a) + 1u32);
    let base = Interval::from_rational(&Rational::from(t / &one_ta), prec).pow(k);
    Ok(match target {
        Target::HalfLog => base.scale(&Rational::from((1u32, 2 * k))),
        Target::RationalPressure => base.div(&Interval::from_rational(&one_ta, prec))?,
    })
}

fn cell_bound(pa: &PolyApprox, coeffs: &[Interval], m: &Rational, h: &Rational, prec: u32) -> Result<CellBound> {
    // Taylor coefficients of q at m by repeated synthetic division.
    let mi = Interval::from_rational(m, prec);
    let mut c: Vec<Interval> = coeffs.to_vec();
    let n = c.len();
    let mut taylor = Vec::with_capacity(n);
    for k in 0..n {
        for i in (k..n - 1).rev() {
            let add = c[i + 1].mul(&mi);
            c[i] = c[i].add(&add);
        }
        taylor.push(c[k].clone());
    }
    let order = TAYLOR_ORDER;
    let ft = target_taylor(pa.target, &pa.t, m, order, prec)?;
    let hi = Interval::from_rational(h, prec);
    let mut bound = Interval::zero(prec);
    let mut hk = Interval::from_f64(1.0, prec);
    let mut r0 = Interval::zero(prec);
    for k in 0..=order.max(n.saturating_sub(1)) {
        let fk = ft.get(k).cloned().unwrap_or_else(|| Interval::zero(prec));
        let qk = taylor.get(k).cloned().unwrap_or_else(|| Interval::zero(prec));
        let rk = if k <= order { fk.sub(&qk) } else { qk.neg() };
        if k == 0 {
            r0 = rk.clone();
        }
        bound = bound.add(&Interval::point(rk.mag()).mul(&hk));
        hk = hk.mul(&hi);
    }
    let left = Rational::from(m - h);
    let rem = target_remainder_coeff(pa.target, &pa.t, &left, order, prec)?;
    let h_pow = hi.pow(order as u32 + 1);
    bound = bound.add(&rem.mul(&h_pow));
    let lower = {
        let lo = r0.lo().clone();
        let hi0 = r0.hi().clone();
        if lo.cmp0() == Some(std::cmp::Ordering::Greater) {
            lo
        } else if hi0.cmp0() == Some(std::cmp::Ordering::Less) {
            Float::with_val(prec, -hi0)
        } else {
            Float::new(prec)
        }
    };
    Ok(CellBound { upper: bound.hi().clone(), lower, width: r0.width() })
}

/// Rigorous upper bound on `sup |f(z) - q(z)|` over `|z| <= R`.
pub fn certify_error(pa: &PolyApprox, cfg: &FitConfig) -> Result<f64> {
    if pa.t == 0 {
        // f = 0: the error is the polynomial's own sup norm, bounded by its coefficients.
        let mut s = Rational::new();
        let mut up = Rational::from(1);
        for a in &pa.u_coeffs {
            s += Rational::from(a.abs_ref()) * &up;
            up *= &pa.radius_sq;
        }
        return Ok(f64_up(&Float::with_val_round(64, &s, rug::float::Round::Up).0));
    }
    let mut prec = cfg.precision_bits.max(64);
    loop {
        match certify_at(pa, cfg, prec)? {
            Some(e) => return Ok(e),
            None if prec < 4096 => {
                log::debug!("certification precision {prec} insufficient, doubling");
                prec *= 2;
            }
            None => return Err(Error::Numerical("certification failed even at 4096 bits".into())),
        }
    }
}

fn certify_at(pa: &PolyApprox, cfg: &FitConfig, prec: u32) -> Result<Option<f64>> {
    let coeffs: Vec<Interval> = pa.u_coeffs.iter().map(|c| Interval::from_rational(c, prec)).collect();
    let cells0 = (32 * pa.degree()).max(64);
    let u = &pa.radius_sq;
    let mut pending: Vec<(Rational, Rational)> = (0..cells0)
        .map(|i| {
            (
                Rational::from(u * Rational::from((i as u64, cells0 as u64))),
                Rational::from(u * Rational::from((i as u64 + 1, cells0 as u64))),
            )
        })
        .collect();
    let mut done_max = Float::new(prec);
    let mut lower_max = Float::new(prec);
    let mut max_width = Float::new(prec);
    let mut evaluated = 0usize;
    let slack = Float::with_val(prec, 1.0 + cfg.certify_slack);
    while !pending.is_empty() {
        evaluated += pending.len();
        let bounds: Vec<CellBound> = pending
            .par_iter()
            .map(|(a, b)| {
                let m = Rational::from(a + b) / 2u32;
                let h = Rational::from(b - a) / 2u32;
                cell_bound(pa, &coeffs, &m, &h, prec)
            })
            .collect::<Result<_>>()?;
        for cb in &bounds {
            if cb.lower > lower_max {
                lower_max = cb.lower.clone();
            }
            if cb.width > max_width {
                max_width = cb.width.clone();
            }
        }
        let threshold = Float::with_val(prec, &lower_max * &slack);
        let mut next = Vec::new();
        let exhausted = evaluated >= cfg.max_cells;
        for ((a, b), cb) in pending.into_iter().zip(bounds) {
            if cb.upper <= threshold || exhausted {
                if cb.upper > done_max {
                    done_max = cb.upper;
                }
            } else {
                let m = Rational::from(&a + &b) / 2u32;
                next.push((a, m.clone()));
                next.push((m, b));
            }
        }
        if exhausted {
            log::warn!("certification hit the cell limit ({}); bound may be loose", cfg.max_cells);
        }
        pending = next;
    }
    // Interval blow-up relative to the error means the precision was too low.
    let rel = Float::with_val(prec, &max_width / &done_max.clone().max(&Float::with_val(prec, 1e-300)));
    if rel > 1e-6 {
        return Ok(None);
    }
    Ok(Some(f64_up(&done_max)))
}

/// `sum c_k mu_k` for an approximation of the integrand, with the fit error.
pub fn integrate_against_moments(pa: &PolyApprox, mu: &MomentSequence) -> Result<CertifiedValue> {
    if pa.degree() > mu.order() {
        return Err(Error::OutOfRange(format!(
            "polynomial degree {} exceeds moment order {}",
            pa.degree(),
            mu.order()
        )));
    }
    let support = Rational::from(mu.support_radius_sq());
    if pa.radius_sq < support {
        return invalid(format!("fit interval R^2 = {} does not cover the support R^2 = {support}", pa.radius_sq));
    }
    let mut s = Rational::new();
    for (k, a) in pa.u_coeffs.iter().enumerate() {
        s += Rational::from(a * mu.mu(2 * k));
    }
    let mut cv = CertifiedValue::exact(s, "");
    cv.eps = f64_up(&Float::with_val_round(64, cv.eps + pa.eps, rug::float::Round::Up).0);
    cv.exact = None;
    cv.provenance = format!(
        "degree-{} fit of {} at t={} on R^2={}, sup error {:e}, integrated against {} moments",
        pa.degree(),
        pa.target,
        pa.t,
        pa.radius_sq,
        pa.eps,
        mu.order()
    );
    Ok(cv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::MomentSource;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn constant_fit_is_the_midrange() {
        let pa = minimax_fit(Target::HalfLog, &q(1), &q(12), 0, &FitConfig::default()).unwrap();
        let quarter_ln13 = 13f64.ln() / 4.0;
        assert!((pa.u_coeffs[0].to_f64() - quarter_ln13).abs() < 1e-9);
        assert!(pa.eps >= quarter_ln13 - 1e-12 && pa.eps < quarter_ln13 * 1.002, "{}", pa.eps);
    }

    #[test]
    fn higher_degree_is_better() {
        let e: Vec<f64> = [0, 2, 4, 8]
            .iter()
            .map(|&n| minimax_fit(Target::HalfLog, &q(1), &q(12), n, &FitConfig::default()).unwrap().eps)
            .collect();
        assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");
    }

    #[test]
    fn zero_polynomial_error_is_sup_of_target() {
        let pa = PolyApprox::from_u_coeffs(Target::HalfLog, q(1), q(12), vec![Rational::new()]);
        let eps = certify_error(&pa, &FitConfig::default()).unwrap();
        let half_ln13 = 13f64.ln() / 2.0;
        assert!(eps >= half_ln13 && eps < half_ln13 * 1.002);
    }

    #[test]
    fn monomial_conversion_is_exact() {
        // T_2(s) = 2 s^2 - 1 with s = u/2 - 1 on [0, 4]: u^2/2 - 2u + 1.
        let c = cheb_to_u_monomial(&[0.0, 0.0, 1.0], &q(4));
        assert_eq!(c, vec![q(1), q(-2), Rational::from((1, 2))]);
    }

    #[test]
    fn integrates_simple_polynomials() {
        let mu = MomentSequence::from_integers(
            [1, 0, 4, 0, 28].iter().map(|&x| Integer::from(x)).collect(),
            4,
            MomentSource::Graph { n: 1 },
        )
        .unwrap();
        let mut pa = PolyApprox::from_u_coeffs(Target::HalfLog, q(1), q(12), vec![q(0), q(1)]);
        pa.eps = 0.0;
        assert_eq!(integrate_against_moments(&pa, &mu).unwrap().value, 4.0);
        pa.u_coeffs = vec![q(1)];
        assert_eq!(integrate_against_moments(&pa, &mu).unwrap().value, 1.0);
        pa.radius_sq = q(8);
        assert!(integrate_against_moments(&pa, &mu).is_err());
    }
}
