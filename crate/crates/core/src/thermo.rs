//! Monomer-dimer thermodynamics: pressure `p(t)`, log-partition density, `F(t)`,
//! the entropy function `lambda(p)` and the inverse activity `t(p)`.
//!
//! Finite graphs are handled exactly from their matching counts; lattices go through
//! their moment sequence and a certified polynomial fit of the integrand.

use rug::{Integer, Rational};

use crate::approx::{integrate_against_moments, minimax_fit, FitConfig, Target};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::interval::{f64_up, CertifiedValue, Interval};
use crate::matching::{matching_counts, MatchingPolynomial};
use crate::moments::{support_radius_sq, MomentSequence, MomentSource};

/// Default bisection tolerance on `t` (relative above 1, absolute below).
pub const T_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub enum ThermoContext {
    Finite { poly: MatchingPolynomial, degree_bound: usize, precision: u32 },
    Lattice { mu: MomentSequence, fit_degree: usize, fit: FitConfig },
}

/// A bracket `t_lo <= t(p) <= t_hi` with the pressures certified at its ends.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub t_lo: Rational,
    pub t_hi: Rational,
    pub p_at_lo: CertifiedValue,
    pub p_at_hi: CertifiedValue,
    /// False when the bisection stopped because the pressure intervals could no
    /// longer be ordered against the target.
    pub converged: bool,
}

impl Inversion {
    pub fn t(&self) -> f64 {
        Rational::from(&self.t_lo + &self.t_hi).to_f64() / 2.0
    }

    pub fn width(&self) -> f64 {
        Rational::from(&self.t_hi - &self.t_lo).to_f64()
    }
}

/// An upper bound without a matching lower bound.
#[derive(Clone, Debug, serde::Serialize)]
pub struct OneSided {
    pub upper: f64,
    /// The density at which the bound was attained.
    pub at_p: f64,
    pub provenance: String,
}

fn ln_of(q: &Rational, prec: u32) -> Result<Interval> {
    Interval::from_rational(q, prec).ln()
}

impl ThermoContext {
    pub fn finite(g: &Graph) -> Result<Self> {
        Ok(Self::from_polynomial(matching_counts(g)?, g.max_degree()))
    }

    pub fn from_polynomial(poly: MatchingPolynomial, degree_bound: usize) -> Self {
        ThermoContext::Finite { poly, degree_bound, precision: crate::interval::DEFAULT_PRECISION }
    }

    /// Lattice context fitting at the largest even degree the moments allow.
    pub fn lattice(mu: MomentSequence) -> Self {
        let fit_degree = mu.order() & !1;
        ThermoContext::Lattice { mu, fit_degree, fit: FitConfig::default() }
    }

    pub fn with_fit_degree(mut self, n: usize) -> Result<Self> {
        if let ThermoContext::Lattice { mu, fit_degree, .. } = &mut self {
            if n > mu.order() {
                return invalid(format!("fit degree {n} exceeds moment order {}", mu.order()));
            }
            *fit_degree = n;
        }
        Ok(self)
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        match &mut self {
            ThermoContext::Finite { precision, .. } => *precision = bits,
            ThermoContext::Lattice { fit, .. } => fit.precision_bits = bits,
        }
        self
    }

    pub fn degree_bound(&self) -> usize {
        match self {
            ThermoContext::Finite { degree_bound, .. } => *degree_bound,
            ThermoContext::Lattice { mu, .. } => mu.degree_bound(),
        }
    }

    fn precision(&self) -> u32 {
        match self {
            ThermoContext::Finite { precision, .. } => *precision,
            ThermoContext::Lattice { fit, .. } => fit.precision_bits,
        }
    }

    /// Supremum of the attainable densities: `2 nu / n`, or 1 on lattices.
    pub fn p_star(&self) -> Rational {
        match self {
            ThermoContext::Finite { poly, .. } if poly.n() == 0 => Rational::new(),
            ThermoContext::Finite { poly, .. } => Rational::from((2 * poly.nu(), poly.n())),
            ThermoContext::Lattice { .. } => Rational::from(1),
        }
    }

    fn check_t(t: &Rational) -> Result<()> {
        if *t < 0 {
            return invalid(format!("activity must be nonnegative, got {t}"));
        }
        Ok(())
    }

    fn fit_and_integrate(&self, target: Target, t: &Rational) -> Result<CertifiedValue> {
        let ThermoContext::Lattice { mu, fit_degree, fit } = self else { unreachable!() };
        let r2 = Rational::from(support_radius_sq(mu.degree_bound()));
        let pa = minimax_fit(target, t, &r2, *fit_degree, fit)?;
        integrate_against_moments(&pa, mu)
    }

    /// Exact pressure of a finite graph.
    fn finite_pressure(poly: &MatchingPolynomial, t: &Rational) -> Rational {
        if poly.n() == 0 {
            return Rational::new();
        }
        let m = poly.partition_poly();
        let num = Rational::from(t * m.derivative().eval_rational(t)) * 2u32;
        let den = m.eval_rational(t) * Integer::from(poly.n());
        num / den
    }

    /// Dimer density `p(t)`: the expected fraction of covered vertices at activity `t`.
    pub fn pressure(&self, t: &Rational) -> Result<CertifiedValue> {
        Self::check_t(t)?;
        match self {
            ThermoContext::Finite { poly, .. } => {
                Ok(CertifiedValue::exact(Self::finite_pressure(poly, t), format!("exact 2tM'/(nM) at t={t}")))
            }
            ThermoContext::Lattice { .. } if *t == 0 => Ok(CertifiedValue::exact(Rational::new(), "p(0) = 0")),
            ThermoContext::Lattice { .. } => self.fit_and_integrate(Target::RationalPressure, t),
        }
    }

    fn log_partition_interval(&self, t: &Rational) -> Result<Interval> {
        let prec = self.precision();
        match self {
            ThermoContext::Finite { poly, .. } => {
                if poly.n() == 0 || *t == 0 {
                    return Ok(Interval::zero(prec));
                }
                Ok(ln_of(&poly.eval_partition(t), prec)?.scale(&Rational::from((1, poly.n()))))
            }
            ThermoContext::Lattice { .. } => {
                if *t == 0 {
                    return Ok(Interval::zero(prec));
                }
                Ok(self.fit_and_integrate(Target::HalfLog, t)?.interval(prec))
            }
        }
    }

    /// `ln M(t) / n`, or its lattice limit.
    pub fn log_partition_density(&self, t: &Rational) -> Result<CertifiedValue> {
        Self::check_t(t)?;
        match self {
            ThermoContext::Finite { .. } => {
                Ok(self.log_partition_interval(t)?.to_certified(format!("interval ln M(t)/n at t={t}")))
            }
            ThermoContext::Lattice { .. } if *t == 0 => Ok(CertifiedValue::exact(Rational::new(), "ln Z(0) = 0")),
            ThermoContext::Lattice { .. } => self.fit_and_integrate(Target::HalfLog, t),
        }
    }

    /// The monomer-dimer free energy `F(1)`.
    pub fn free_energy(&self) -> Result<CertifiedValue> {
        self.log_partition_density(&Rational::from(1))
    }

    fn f_interval(&self, t: &Rational) -> Result<Interval> {
        let prec = self.precision();
        if *t == 0 {
            return Ok(Interval::zero(prec));
        }
        let z = self.log_partition_interval(t)?;
        let p = self.pressure(t)?.interval(prec);
        let half_ln_t = ln_of(t, prec)?.scale(&Rational::from((1, 2)));
        Ok(z.sub(&p.mul(&half_ln_t)))
    }

    /// `F(t) = ln Z(t) - ½ p(t) ln t`.
    pub fn free_energy_at(&self, t: &Rational) -> Result<CertifiedValue> {
        Self::check_t(t)?;
        Ok(self.f_interval(t)?.to_certified(format!("F(t) at t={t}")))
    }

    /// Pressure compared with `target`: `Some(Less)` if certainly below, `Some(Greater)`
    /// if certainly above (equality counts as either for exact values), `None` if the
    /// enclosure straddles the target.
    fn compare(&self, t: &Rational, target: &Rational) -> Result<(Option<std::cmp::Ordering>, CertifiedValue)> {
        use std::cmp::Ordering::*;
        let p = self.pressure(t)?;
        let ord = match &p.exact {
            Some(q) => Some(if q < target { Less } else { Greater }),
            None => {
                let iv = p.interval(256);
                let tgt = Interval::from_rational(target, 256);
                if iv.hi() < tgt.lo() {
                    Some(Less)
                } else if iv.lo() > tgt.hi() {
                    Some(Greater)
                } else {
                    None
                }
            }
        };
        Ok((ord, p))
    }

    /// Brackets the activity `t(p)` at which the density equals `p`.
    pub fn invert_pressure(&self, p: &Rational) -> Result<Inversion> {
        self.invert_pressure_tol(p, T_TOLERANCE)
    }

    pub fn invert_pressure_tol(&self, p: &Rational, tol: f64) -> Result<Inversion> {
        use std::cmp::Ordering::*;
        let p_star = self.p_star();
        if *p < 0 || *p >= p_star {
            return Err(Error::OutOfRange(format!("density {p} outside [0, {p_star})")));
        }
        let zero = Rational::new();
        if *p == 0 {
            let p0 = CertifiedValue::exact(zero.clone(), "p(0) = 0");
            return Ok(Inversion { t_lo: zero.clone(), t_hi: zero, p_at_lo: p0.clone(), p_at_hi: p0, converged: true });
        }
        // Certified ends: p(lo) < target < p(hi). Points whose enclosure straddles the
        // target are uninformative and only narrow the search for each end.
        let mut hi = Rational::from(1);
        let mut straddles = 0;
        let p_hi_val = loop {
            let (ord, pv) = self.compare(&hi, p)?;
            if ord == Some(Greater) {
                break pv;
            }
            // Lattice fits degrade as t grows, so a persistent straddle never resolves.
            straddles = if ord.is_none() { straddles + 1 } else { 0 };
            if straddles > 4 {
                return Err(Error::Numerical(format!(
                    "pressure enclosure too wide to bracket t({p}); raise the moment order"
                )));
            }
            hi *= 2u32;
            if hi > (1u64 << 50) {
                return Err(Error::OutOfRange(format!("density {p} needs an activity beyond 2^50")));
            }
        };
        let mut lo = Rational::from(1);
        let p_lo_val = loop {
            let (ord, pv) = self.compare(&lo, p)?;
            if ord == Some(Less) {
                break pv;
            }
            lo /= 2u32;
            if lo < Rational::from((1u64, 1u64 << 60)) {
                return Err(Error::OutOfRange(format!("density {p} needs an activity below 2^-60")));
            }
        };
        let (mut p_lo, mut p_hi) = (p_lo_val, p_hi_val);
        let small = |a: &Rational, b: &Rational| Rational::from(b - a).to_f64() <= tol * b.to_f64().max(1.0);
        // Undecided points bounding the search from inside, if any were met.
        let (mut u_lo, mut u_hi): (Option<Rational>, Option<Rational>) = (None, None);
        let mut converged = true;
        loop {
            let right = u_lo.clone().unwrap_or_else(|| hi.clone());
            let left = u_hi.clone().unwrap_or_else(|| lo.clone());
            let lower_done = small(&lo, &right);
            let upper_done = small(&left, &hi);
            if lower_done && upper_done {
                break;
            }
            // Tighten whichever end is still wide.
            let mid =
                if !lower_done { Rational::from(&lo + &right) / 2u32 } else { Rational::from(&left + &hi) / 2u32 };
            let (ord, pm) = self.compare(&mid, p)?;
            match ord {
                Some(Less) => {
                    lo = mid;
                    p_lo = pm;
                }
                Some(_) => {
                    hi = mid;
                    p_hi = pm;
                }
                None => {
                    converged = false;
                    if u_lo.as_ref().map_or(true, |u| mid < *u) {
                        u_lo = Some(mid.clone());
                    }
                    if u_hi.as_ref().map_or(true, |u| mid > *u) {
                        u_hi = Some(mid);
                    }
                }
            }
            if u_lo.as_ref().is_some_and(|u| *u >= hi || *u <= lo) {
                u_lo = None;
            }
            if u_hi.as_ref().is_some_and(|u| *u >= hi || *u <= lo) {
                u_hi = None;
            }
        }
        Ok(Inversion { t_lo: lo, t_hi: hi, p_at_lo: p_lo, p_at_hi: p_hi, converged })
    }

    /// `lambda(p) = F(t(p))`, the exponential growth rate per site of the number of
    /// monomer-dimer arrangements at dimer density `p`.
    ///
    /// Since `G(t) = ln Z(t) - ½ p ln t` is minimised exactly at `t(p)`, `G` at any point
    /// of the bracket is an upper bound; the lower bound uses `|G'| <= Δp / (2 t_lo)`.
    pub fn lambda_of_p(&self, p: &Rational) -> Result<CertifiedValue> {
        let prec = self.precision();
        if *p < 0 {
            return invalid(format!("density must be nonnegative, got {p}"));
        }
        if *p == 0 {
            return Ok(CertifiedValue::exact(Rational::new(), "lambda(0) = 0"));
        }
        let p_star = self.p_star();
        if let ThermoContext::Finite { poly, .. } = self {
            if *p > p_star {
                return Ok(CertifiedValue::exact(Rational::new(), "lambda(p) = 0 above p*"));
            }
            if *p == p_star {
                let top = Rational::from(poly.counts()[poly.nu()].clone());
                let iv = ln_of(&top, prec)?.scale(&Rational::from((1, poly.n())));
                return Ok(iv.to_certified("ln m_nu / n at p = p*"));
            }
        } else if *p >= p_star {
            return Err(Error::OutOfRange(format!(
                "lattice lambda(p) is only certified for p < 1 (got {p}); use lambda_upper_at_one"
            )));
        }
        Ok(self.lambda_bracketed(p, T_TOLERANCE)?.0)
    }

    /// `lambda(p)` for `0 < p < p*` from a bracket of `t(p)` with the given tolerance.
    fn lambda_bracketed(&self, p: &Rational, tol: f64) -> Result<(CertifiedValue, Inversion)> {
        let prec = self.precision();
        let inv = self.invert_pressure_tol(p, tol)?;
        let mid = Rational::from(&inv.t_lo + &inv.t_hi) / 2u32;
        let z = self.log_partition_interval(&mid)?;
        let g = z.sub(&ln_of(&mid, prec)?.scale(&Rational::from(p / 2u32)));
        let dp = Rational::from(&inv.t_hi - &inv.t_lo);
        let slack = if dp == 0 {
            Interval::zero(prec)
        } else {
            let spread = inv.p_at_hi.interval(prec).sub(&inv.p_at_lo.interval(prec));
            Interval::from_rational(&dp, prec)
                .mul(&Interval::point(spread.hi().clone()))
                .div(&Interval::from_rational(&(inv.t_lo.clone() * 2u32), prec))?
        };
        let lo = g.sub(&slack);
        let iv = Interval::hull(lo.lo().clone(), g.hi().clone());
        let cv =
            iv.to_certified(format!("G(t) on the bracket [{:e}, {:e}] for t(p)", inv.t_lo.to_f64(), inv.t_hi.to_f64()));
        Ok((cv, inv))
    }

    /// `F(t)` along `t = base^j`, decreasing towards `lambda(p*)` (finite graphs).
    pub fn escalate_to_p_star(&self, base: u32, steps: usize) -> Result<Vec<(Rational, CertifiedValue)>> {
        let mut t = Rational::from(1);
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            out.push((t.clone(), self.free_energy_at(&t)?));
            t *= base;
        }
        Ok(out)
    }

    /// Concavity bound `lambda(1) <= lambda(p) - ½ (1 - p) ln t(p)`, minimised over `grid`.
    pub fn lambda_upper_at_one(&self, grid: &[Rational]) -> Result<OneSided> {
        if matches!(self, ThermoContext::Finite { .. }) {
            return invalid("the one-sided bound at p = 1 is for lattices; finite graphs have lambda(p*) exactly");
        }
        let prec = self.precision();
        let mut best: Option<OneSided> = None;
        for p in grid {
            if *p <= 0 || *p >= 1 {
                continue;
            }
            // Any bracket keeps the bound sound, so a coarse one is enough here.
            let (lam, inv) = match self.lambda_bracketed(p, 1e-4) {
                Ok(v) => v,
                Err(Error::Numerical(msg)) | Err(Error::OutOfRange(msg)) => {
                    log::debug!("skipping p = {p} in the lambda(1) bound: {msg}");
                    continue;
                }
                Err(e) => return Err(e),
            };
            let one_minus = Rational::from(1 - p.clone()) / 2u32;
            let bound = lam.interval(prec).sub(&ln_of(&inv.t_lo, prec)?.scale(&one_minus));
            let upper = f64_up(bound.hi());
            if best.as_ref().map_or(true, |b| upper < b.upper) {
                best = Some(OneSided {
                    upper,
                    at_p: p.to_f64(),
                    provenance: "tangent line of the concave entropy function".into(),
                });
            }
        }
        best.ok_or_else(|| Error::InvalidInput("grid has no density in (0, 1)".into()))
    }
}

/// `|lambda(2k/n) - ln m_k / n| <= ln n / n`, decided with certified enclosures.
pub fn darroch_bounds_check(g: &Graph, k: usize) -> Result<bool> {
    let ctx = ThermoContext::finite(g)?;
    let ThermoContext::Finite { poly, precision, .. } = &ctx else { unreachable!() };
    let n = g.n();
    if k == 0 || k > poly.nu() {
        return invalid(format!("k = {k} outside 1..={}", poly.nu()));
    }
    let prec = *precision;
    let lam = ctx.lambda_of_p(&Rational::from((2 * k, n)))?.interval(prec);
    let lnm = ln_of(&Rational::from(poly.counts()[k].clone()), prec)?.scale(&Rational::from((1, n)));
    let diff = lam.sub(&lnm);
    let bound = ln_of(&Rational::from(n), prec)?.scale(&Rational::from((1, n)));
    Ok(diff.mag() <= *bound.lo())
}

/// Moments from Mayer coefficients `a_1..a_N` of `p(t) = sum a_n t^n`:
/// `mu_(2n) = (-1)^(n+1) a_n`, odd moments zero.
pub fn mayer_to_moments(a: &[Rational], degree_bound: usize, source: MomentSource) -> Result<MomentSequence> {
    let mut mu = vec![Rational::from(1)];
    for (i, an) in a.iter().enumerate() {
        let n = i + 1;
        let m = if n % 2 == 1 { an.clone() } else { Rational::from(-an) };
        if m <= 0 {
            return invalid(format!("Mayer coefficient a_{n} = {an} has the wrong sign (moment {m} must be positive)"));
        }
        mu.push(Rational::new());
        mu.push(m);
    }
    MomentSequence::new(mu, degree_bound, source)
}

/// Inverse of [`mayer_to_moments`]: `a_1..a_(K/2)`.
pub fn moments_to_mayer(mu: &MomentSequence) -> Vec<Rational> {
    (1..=mu.order() / 2)
        .map(|n| {
            let m = mu.mu(2 * n).clone();
            if n % 2 == 1 {
                m
            } else {
                -m
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, pyramid};

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn k2_closed_forms() {
        let ctx = ThermoContext::finite(&complete(2)).unwrap();
        assert_eq!(ctx.pressure(&q(1, 1)).unwrap().exact, Some(q(1, 2)));
        let lz = ctx.log_partition_density(&q(1, 1)).unwrap();
        assert!((lz.value - std::f64::consts::LN_2 / 2.0).abs() < 1e-15 && lz.eps < 1e-15);
        let inv = ctx.invert_pressure(&q(2, 3)).unwrap();
        assert!((inv.t() - 2.0).abs() < 1e-9);
        let l = ctx.lambda_of_p(&q(1, 2)).unwrap();
        assert!((l.value - std::f64::consts::LN_2 / 2.0).abs() < 1e-9);
        assert_eq!(ctx.lambda_of_p(&q(1, 1)).unwrap().value, 0.0);
        assert!(matches!(ctx.invert_pressure(&q(1, 1)), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn c4_values() {
        let ctx = ThermoContext::finite(&cycle(4).unwrap()).unwrap();
        let lz = ctx.log_partition_density(&q(1, 1)).unwrap();
        assert!((lz.value - 7f64.ln() / 4.0).abs() < 1e-12);
        let top = ctx.lambda_of_p(&q(1, 1)).unwrap();
        assert!((top.value - 2f64.ln() / 4.0).abs() < 1e-12);
        assert_eq!(
            ThermoContext::finite(&Graph::empty(3)).unwrap().log_partition_density(&q(5, 1)).unwrap().value,
            0.0
        );
    }

    #[test]
    fn escalation_decreases_to_the_top_value() {
        let ctx = ThermoContext::finite(&pyramid()).unwrap();
        let seq = ctx.escalate_to_p_star(4, 14).unwrap();
        assert!(seq.windows(2).all(|w| w[1].1.value < w[0].1.value));
        let target = 10f64.ln() / 5.0;
        assert!((seq.last().unwrap().1.value - target).abs() < 1e-6);
    }

    #[test]
    fn darroch_small() {
        assert!(darroch_bounds_check(&complete(2), 1).unwrap());
        assert!(darroch_bounds_check(&pyramid(), 1).unwrap());
        assert!(darroch_bounds_check(&pyramid(), 2).unwrap());
        assert!(darroch_bounds_check(&pyramid(), 3).is_err());
    }

    #[test]
    fn mayer_round_trip() {
        let a: Vec<Rational> = [4, -28, 232].iter().map(|&x| Rational::from(x)).collect();
        let mu = mayer_to_moments(&a, 4, MomentSource::Ingested { provenance: "test".into() }).unwrap();
        assert_eq!(mu.mu(2), &Rational::from(4));
        assert_eq!(mu.mu(4), &Rational::from(28));
        assert_eq!(moments_to_mayer(&mu), a);
        assert!(mayer_to_moments(
            &[Rational::from(4), Rational::from(28)],
            4,
            MomentSource::Ingested { provenance: String::new() }
        )
        .is_err());
    }
}
