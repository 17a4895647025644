//! Where graphs and moment sequences come from: named graph families, JSON files,
//! lattice enumeration and Mayer-series CSV files.

use std::path::Path;

use mdim_core::graph::{
    build_box, build_honeycomb_patch, circulant, complete, cycle, cylinder, hypercube, path, petersen, pyramid, star,
    torus, wheel, Graph,
};
use mdim_core::interval::parse_rational;
use mdim_core::matching::{matching_counts, strip_matching_counts, torus_matching_counts};
use mdim_core::saw::{lattice_moments, SawConfig};
use mdim_core::thermo::mayer_to_moments;
use mdim_core::{LatticeSpec, MatchingPolynomial, MomentSequence, MomentSource};
use rug::Rational;

use crate::error::{input, CliResult, Failure};

/// A finite graph with its matching polynomial.
#[derive(Clone, Debug)]
pub struct FiniteSource {
    pub name: String,
    pub graph: Graph,
    pub poly: MatchingPolynomial,
}

impl FiniteSource {
    pub fn degree_bound(&self) -> usize {
        self.graph.max_degree()
    }
}

fn num(s: &str, what: &str) -> CliResult<usize> {
    s.trim().parse().map_err(|_| Failure::Input(format!("bad {what} {s:?}")))
}

fn dims(s: &str) -> CliResult<(usize, usize)> {
    match s.split_once('x') {
        Some((a, b)) => Ok((num(a, "size")?, num(b, "size")?)),
        None => input(format!("expected MxN, got {s:?}")),
    }
}

/// Parses a graph description: a JSON file (`{"n": .., "edges": [[u, v], ..]}`) or
/// one of `cycle:N`, `path:N`, `complete:N`, `star:K`, `wheel:K`, `hypercube:D`,
/// `circulant:N:J1,J2,..`, `grid:MxN`, `strip:MxN` (C_M x P_N), `torus:MxN`,
/// `hex:RxC`, `petersen`, `pyramid`.
///
/// Strips and narrow tori use transfer matrices for the matching counts.
pub fn parse_graph(spec: &str) -> CliResult<FiniteSource> {
    let spec = spec.trim();
    if Path::new(spec).is_file() {
        let graph = Graph::from_json(&std::fs::read_to_string(spec)?)?;
        let poly = matching_counts(&graph)?;
        return Ok(FiniteSource { name: spec.into(), graph, poly });
    }
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let mut poly = None;
    let graph = match kind {
        "cycle" => cycle(num(arg, "cycle length")?)?,
        "path" => path(num(arg, "path length")?),
        "complete" => complete(num(arg, "vertex count")?),
        "star" => star(num(arg, "leaf count")?),
        "wheel" => wheel(num(arg, "rim length")?)?,
        "hypercube" => hypercube(num(arg, "dimension")?),
        "petersen" => petersen(),
        "pyramid" => pyramid(),
        "circulant" => {
            let (n, jumps) =
                arg.split_once(':').ok_or_else(|| Failure::Input(format!("expected circulant:N:J,.. in {spec:?}")))?;
            let jumps = jumps.split(',').map(|j| num(j, "jump")).collect::<CliResult<Vec<_>>>()?;
            circulant(num(n, "vertex count")?, &jumps)?
        }
        "grid" => {
            let (m, n) = dims(arg)?;
            build_box(2, &[m, n], false)?
        }
        "strip" => {
            let (m, n) = dims(arg)?;
            poly = Some(strip_matching_counts(m, n)?);
            cylinder(m, n)?
        }
        "torus" => {
            let (m, n) = dims(arg)?;
            let (w, l) = (m.min(n), m.max(n));
            poly = torus_matching_counts(w, l).ok();
            torus(m, n)?
        }
        "hex" => {
            let (r, c) = dims(arg)?;
            build_honeycomb_patch(r, c, false)?
        }
        _ => return input(format!("unknown graph {spec:?} (not a file or a known family)")),
    };
    let poly = match poly {
        Some(p) => p,
        None => matching_counts(&graph)?,
    };
    Ok(FiniteSource { name: spec.into(), graph, poly })
}

/// Reads a moments JSON file as written by `mdim moments`.
pub fn load_moments(path: &Path) -> CliResult<MomentSequence> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(MomentSequence::from_json(&text)?)
}

/// Mayer coefficients from CSV rows `n,value` (n = 1, 2, ... in order; a header row
/// and `#` comments are allowed). With `halved`, the values are `d_n = a_n / 2`.
pub fn parse_mayer_csv(text: &str, halved: bool) -> CliResult<Vec<Rational>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != 2 {
            return input(format!("row {}: expected `n,value`, got {} fields", line + 1, rec.len()));
        }
        let n: usize = match rec[0].parse() {
            Ok(n) => n,
            Err(_) if line == 0 && out.is_empty() => continue,
            Err(_) => return input(format!("row {}: bad index {:?}", line + 1, &rec[0])),
        };
        if n != out.len() + 1 {
            return input(format!("row {}: expected n = {}, got {n}", line + 1, out.len() + 1));
        }
        let v = parse_rational(&rec[1])
            .map_err(|_| Failure::Input(format!("row {}: bad value {:?}", line + 1, &rec[1])))?;
        out.push(if halved { v * 2u32 } else { v });
    }
    Ok(out)
}

/// Moment sequence from a Mayer-series CSV file.
pub fn ingest_mayer(path: &Path, halved: bool, degree_bound: usize) -> CliResult<MomentSequence> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let a = parse_mayer_csv(&text, halved)?;
    let provenance = format!("Mayer coefficients from {}{}", path.display(), if halved { " (halved)" } else { "" });
    Ok(mayer_to_moments(&a, degree_bound, MomentSource::Ingested { provenance })?)
}

/// Command-line choice of a moment sequence for a lattice or infinite graph.
#[derive(Clone, Debug, Default)]
pub struct MomentArgs {
    pub moments: Option<std::path::PathBuf>,
    pub mayer: Option<std::path::PathBuf>,
    pub halved: bool,
    pub lattice: Option<LatticeSpec>,
    pub max_order: Option<usize>,
}

impl MomentArgs {
    pub fn describe(&self) -> String {
        if let Some(p) = &self.moments {
            format!("moments file {}", p.display())
        } else if let Some(p) = &self.mayer {
            format!("Mayer file {}{}", p.display(), if self.halved { " (halved)" } else { "" })
        } else if let Some(l) = self.lattice {
            format!("lattice {l}")
        } else {
            "none".into()
        }
    }

    /// Resolves the sequence: a moments file, a Mayer file (whose support comes from
    /// `--lattice`), or enumeration of the lattice to `--max-order`.
    pub fn resolve(&self, cfg: &SawConfig) -> CliResult<MomentSequence> {
        let mu = if let Some(p) = &self.moments {
            load_moments(p)?
        } else if let Some(p) = &self.mayer {
            let l = self.lattice.ok_or_else(|| Failure::Input("--mayer needs --lattice for the support".into()))?;
            ingest_mayer(p, self.halved, l.coordination())?
        } else if let Some(l) = self.lattice {
            let k = self.max_order.ok_or_else(|| Failure::Input("--lattice needs --max-order".into()))?;
            lattice_moments(l, k, cfg)?
        } else {
            return input("no moment source: give --moments, --mayer or --lattice");
        };
        let mu = match self.max_order {
            Some(k) if k < mu.order() => mu.truncate(k)?,
            _ => mu,
        };
        let bad = mu.invariant_violations();
        if !bad.is_empty() {
            return Err(Failure::Invariant(format!("{}: {}", self.describe(), bad.join("; "))));
        }
        Ok(mu)
    }
}
