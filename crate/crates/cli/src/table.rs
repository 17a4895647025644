//! Free energy and density at unit activity for a list of lattices, compared with
//! the published table.

use std::path::PathBuf;

use mdim_core::interval::CertifiedValue;
use mdim_core::reference::{honeycomb_moments, table_row, TableRow};
use mdim_core::saw::lattice_moments;
use mdim_core::thermo::ThermoContext;
use mdim_core::{LatticeSpec, MomentSequence};
use rug::Rational;

use crate::error::{CliResult, Failure};
use crate::job::{Globals, JobSpec};
use crate::sources::{ingest_mayer, load_moments};

#[derive(Clone, Debug, Default)]
pub struct TableSources {
    /// Directory holding `<lattice>.json` moment files or `<lattice>.csv` Mayer files.
    pub moments_dir: Option<PathBuf>,
    /// Mayer files hold `d_n = a_n / 2`.
    pub halved: bool,
    /// Enumerate moments to this order when no file is found.
    pub max_order: Option<usize>,
    /// Use the published honeycomb list for `hex`.
    pub reference_hex: bool,
    /// Fit degree (default: largest even degree the moments allow).
    pub degree: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub lattice: LatticeSpec,
    pub source: String,
    pub order: Option<usize>,
    pub degree: Option<usize>,
    pub free_energy: Option<CertifiedValue>,
    pub pressure: Option<CertifiedValue>,
    pub published: Option<&'static TableRow>,
    pub note: Option<String>,
}

impl Row {
    pub fn available(&self) -> bool {
        self.free_energy.is_some() && self.pressure.is_some()
    }

    /// Whether the certified free energy interval contains the published value.
    pub fn free_energy_contains(&self) -> Option<bool> {
        Some(self.free_energy.as_ref()?.contains(self.published?.free_energy.parse().ok()?))
    }

    pub fn pressure_contains(&self) -> Option<bool> {
        Some(self.pressure.as_ref()?.contains(self.published?.pressure.parse().ok()?))
    }
}

fn file_stem(l: LatticeSpec) -> String {
    l.to_string().replace(':', "")
}

fn find_moments(l: LatticeSpec, src: &TableSources, g: &Globals) -> CliResult<Option<(MomentSequence, String)>> {
    if let Some(dir) = &src.moments_dir {
        let json = dir.join(format!("{}.json", file_stem(l)));
        if json.is_file() {
            return Ok(Some((load_moments(&json)?, format!("moments file {}", json.display()))));
        }
        let csv = dir.join(format!("{}.csv", file_stem(l)));
        if csv.is_file() {
            return Ok(Some((
                ingest_mayer(&csv, src.halved, l.coordination())?,
                format!("Mayer file {}", csv.display()),
            )));
        }
    }
    if l == LatticeSpec::Honeycomb && src.reference_hex {
        return Ok(Some((honeycomb_moments(), "published honeycomb list".into())));
    }
    if let Some(k) = src.max_order {
        return Ok(Some((lattice_moments(l, k, &g.saw_config())?, format!("enumerated to order {k}"))));
    }
    Ok(None)
}

fn row(l: LatticeSpec, src: &TableSources, g: &Globals) -> Row {
    let mut r = Row {
        lattice: l,
        source: "unavailable".into(),
        order: None,
        degree: None,
        free_energy: None,
        pressure: None,
        published: table_row(l),
        note: None,
    };
    let result = (|| -> CliResult<()> {
        let Some((mu, source)) = find_moments(l, src, g)? else {
            r.note = Some("no moments".into());
            return Ok(());
        };
        if mu.degree_bound() != l.coordination() {
            return Err(Failure::Input(format!(
                "moments have D = {}, lattice {l} has {}",
                mu.degree_bound(),
                l.coordination()
            )));
        }
        let bad = mu.invariant_violations();
        if !bad.is_empty() {
            return Err(Failure::Invariant(format!("{source}: {}", bad.join("; "))));
        }
        r.source = source;
        r.order = Some(mu.order());
        let mut ctx = ThermoContext::lattice(mu).with_precision(g.precision_bits);
        if let Some(n) = src.degree {
            ctx = ctx.with_fit_degree(n)?;
        }
        if let ThermoContext::Lattice { fit_degree, .. } = &ctx {
            r.degree = Some(*fit_degree);
        }
        r.free_energy = Some(ctx.free_energy()?);
        r.pressure = Some(ctx.pressure(&Rational::from(1))?);
        Ok(())
    })();
    if let Err(e) = result {
        r.note = Some(e.to_string());
        r.free_energy = None;
        r.pressure = None;
    }
    r
}

pub fn run_table(lattices: &[LatticeSpec], src: &TableSources, g: &Globals) -> Vec<Row> {
    lattices.iter().map(|&l| row(l, src, g)).collect()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

pub const TSV_HEADER: &str =
    "lattice\tsource\tK\tN\tfree_energy\tfree_energy_eps\tpublished_free_energy\tfree_energy_in_interval\tpressure\tpressure_eps\tpublished_pressure\tpressure_in_interval\tnote";

pub fn to_tsv(job: &JobSpec, rows: &[Row]) -> String {
    let mut s = job.header();
    s.push_str(TSV_HEADER);
    s.push('\n');
    for r in rows {
        let cv = |c: &Option<CertifiedValue>| match c {
            Some(c) => (format!("{:.12}", c.value), format!("{:.3e}", c.eps)),
            None => ("-".into(), "-".into()),
        };
        let (fe, fe_eps) = cv(&r.free_energy);
        let (p, p_eps) = cv(&r.pressure);
        let fields = [
            r.lattice.to_string(),
            r.source.clone(),
            opt(r.order),
            opt(r.degree),
            fe,
            fe_eps,
            opt(r.published.map(|p| p.free_energy)),
            opt(r.free_energy_contains()),
            p,
            p_eps,
            opt(r.published.map(|p| p.pressure)),
            opt(r.pressure_contains()),
            opt(r.note.clone()),
        ];
        s.push_str(&fields.join("\t"));
        s.push('\n');
    }
    s
}

/// Exit status for `--strict`: missing rows are input errors, published values outside
/// the certified interval are invariant failures.
pub fn strict_status(rows: &[Row]) -> CliResult<()> {
    let missing: Vec<String> = rows.iter().filter(|r| !r.available()).map(|r| r.lattice.to_string()).collect();
    if !missing.is_empty() {
        return Err(Failure::Input(format!("unavailable rows: {}", missing.join(", "))));
    }
    let outside: Vec<String> = rows
        .iter()
        .filter(|r| r.free_energy_contains() == Some(false) || r.pressure_contains() == Some(false))
        .map(|r| r.lattice.to_string())
        .collect();
    if !outside.is_empty() {
        return Err(Failure::Invariant(format!(
            "published value outside the certified interval: {}",
            outside.join(", ")
        )));
    }
    Ok(())
}
