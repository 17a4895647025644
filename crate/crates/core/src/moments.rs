//! Moment sequences of symmetric probability measures on a bounded interval.

use std::fmt;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{invalid, Error, Result};
use crate::lattice::LatticeSpec;

/// Where a moment sequence came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MomentSource {
    Lattice(LatticeSpec),
    /// Matching measure of a finite graph on `n` vertices.
    Graph {
        n: usize,
    },
    /// Read from an external file (Mayer coefficients or a moments file).
    Ingested {
        provenance: String,
    },
}

impl fmt::Display for MomentSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentSource::Lattice(l) => write!(f, "lattice {l}"),
            MomentSource::Graph { n } => write!(f, "finite graph on {n} vertices"),
            MomentSource::Ingested { provenance } => write!(f, "ingested: {provenance}"),
        }
    }
}

/// Exact moments `mu_0..mu_K` together with the degree bound `D` of the underlying
/// graph or lattice, which fixes the support `[-2 sqrt(D-1), 2 sqrt(D-1)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    mu: Vec<Rational>,
    degree_bound: usize,
    source: MomentSource,
}

#[derive(Serialize, Deserialize)]
struct MomentsJson {
    #[serde(default)]
    lattice: Option<String>,
    #[serde(rename = "D")]
    d: usize,
    moments: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
}

impl MomentSequence {
    pub fn new(mu: Vec<Rational>, degree_bound: usize, source: MomentSource) -> Result<Self> {
        match mu.first() {
            None => invalid("moment sequence is empty"),
            Some(m0) if *m0 != 1 => invalid(format!("mu_0 must be 1, got {m0}")),
            _ => Ok(MomentSequence { mu, degree_bound, source }),
        }
    }

    pub fn from_integers(mu: Vec<Integer>, degree_bound: usize, source: MomentSource) -> Result<Self> {
        Self::new(mu.into_iter().map(Rational::from).collect(), degree_bound, source)
    }

    /// Highest available order `K`.
    pub fn order(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn mu(&self, k: usize) -> &Rational {
        &self.mu[k]
    }

    pub fn moments(&self) -> &[Rational] {
        &self.mu
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn source(&self) -> &MomentSource {
        &self.source
    }

    pub fn with_source(mut self, source: MomentSource) -> Self {
        self.source = source;
        self
    }

    /// The moments as integers, if they all are.
    pub fn integers(&self) -> Option<Vec<Integer>> {
        self.mu.iter().map(|q| (*q.denom() == 1).then(|| q.numer().clone())).collect()
    }

    /// Prefix `mu_0..mu_k`.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::OutOfRange(format!("order {k} exceeds available order {}", self.order())));
        }
        Ok(MomentSequence { mu: self.mu[..=k].to_vec(), ..self.clone() })
    }

    /// Square of the support radius: `4(D-1)` for `D >= 2`. A maximum degree of 1
    /// means disjoint edges (roots `±1`), and 0 means no edges (all roots 0).
    pub fn support_radius_sq(&self) -> Integer {
        support_radius_sq(self.degree_bound)
    }

    pub fn odd_moments_vanish(&self) -> bool {
        self.mu.iter().skip(1).step_by(2).all(|m| *m == 0)
    }

    /// `mu_2k <= R^2k` for every available even order.
    pub fn support_bound_holds(&self) -> bool {
        let r2 = self.support_radius_sq();
        let mut pow = Integer::from(1);
        for k in 0..=self.order() / 2 {
            if self.mu[2 * k] > pow {
                return false;
            }
            pow *= &r2;
        }
        true
    }

    /// Positive semidefiniteness of the Hankel matrices `[mu_(i+j)]`, `2m <= K`,
    /// by exact symmetric elimination.
    pub fn hankel_psd(&self) -> bool {
        let m = self.order() / 2;
        let mut a: Vec<Vec<Rational>> = (0..=m).map(|i| (0..=m).map(|j| self.mu[i + j].clone()).collect()).collect();
        for k in 0..=m {
            let piv = a[k][k].clone();
            match piv.cmp0() {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Equal => {
                    if a[k][k + 1..].iter().any(|x| *x != 0) {
                        return false;
                    }
                }
                std::cmp::Ordering::Greater => {
                    for i in k + 1..=m {
                        if a[k][i] == 0 {
                            continue;
                        }
                        let f = Rational::from(&a[k][i] / &piv);
                        for j in i..=m {
                            let d = Rational::from(&f * &a[k][j]);
                            a[i][j] -= &d;
                            if j != i {
                                a[j][i] = a[i][j].clone();
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Human-readable list of violated invariants (empty when all hold).
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.mu[0] != 1 {
            out.push("mu_0 != 1".to_string());
        }
        if !self.odd_moments_vanish() {
            out.push("odd moment nonzero".to_string());
        }
        if !self.support_bound_holds() {
            out.push("support bound mu_2k <= (4(D-1))^k violated".to_string());
        }
        if !self.hankel_psd() {
            out.push("Hankel matrix not positive semidefinite".to_string());
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let lattice = match &self.source {
            MomentSource::Lattice(l) => Some(l.to_string()),
            _ => None,
        };
        json!({
            "lattice": lattice,
            "D": self.degree_bound,
            "moments": self.mu.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "source": self.source.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: MomentsJson = serde_json::from_str(s)?;
        let mu = j
            .moments
            .iter()
            .map(|m| m.trim().parse::<Rational>().map_err(|_| Error::InvalidInput(format!("bad moment {m:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let source = match j.lattice {
            Some(l) => MomentSource::Lattice(l.parse()?),
            None => MomentSource::Ingested { provenance: j.source.unwrap_or_else(|| "moments file".into()) },
        };
        if let MomentSource::Lattice(l) = &source {
            if l.coordination() != j.d {
                return invalid(format!("lattice {l} has coordination {}, file says D={}", l.coordination(), j.d));
            }
        }
        Self::new(mu, j.d, source)
    }
}

pub fn support_radius_sq(degree_bound: usize) -> Integer {
    match degree_bound {
        0 => Integer::new(),
        1 => Integer::from(1),
        d => Integer::from(4 * (d - 1)),
    }
}
