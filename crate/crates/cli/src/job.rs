//! Resolved job descriptions, embedded in every artifact the CLI writes.

use std::collections::BTreeMap;
use std::path::PathBuf;

use mdim_core::saw::SawConfig;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliResult;

/// Flags shared by every subcommand, after defaults have been resolved.
#[derive(Clone, Debug, Serialize)]
pub struct Globals {
    pub threads: usize,
    pub precision_bits: u32,
    pub node_budget: u64,
    pub out: Option<PathBuf>,
}

impl Globals {
    pub fn saw_config(&self) -> SawConfig {
        SawConfig { node_budget: self.node_budget, ..SawConfig::default() }
    }
}

impl Default for Globals {
    fn default() -> Self {
        Globals {
            threads: rayon::current_num_threads(),
            precision_bits: mdim_core::interval::DEFAULT_PRECISION,
            node_budget: SawConfig::default().node_budget,
            out: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JobSpec {
    pub subcommand: String,
    pub source: String,
    pub order: Option<usize>,
    pub t: Vec<String>,
    pub p: Vec<String>,
    pub degree: Option<usize>,
    pub threads: usize,
    pub precision_bits: u32,
    pub node_budget: u64,
    pub output: String,
    pub options: BTreeMap<String, String>,
}

impl JobSpec {
    pub fn new(subcommand: &str, source: impl Into<String>, g: &Globals) -> Self {
        JobSpec {
            subcommand: subcommand.into(),
            source: source.into(),
            order: None,
            t: Vec::new(),
            p: Vec::new(),
            degree: None,
            threads: g.threads,
            precision_bits: g.precision_bits,
            node_budget: g.node_budget,
            output: g.out.as_ref().map_or_else(|| "stdout".into(), |p| p.display().to_string()),
            options: BTreeMap::new(),
        }
    }

    pub fn option(mut self, key: &str, value: impl ToString) -> Self {
        self.options.insert(key.into(), value.to_string());
        self
    }

    /// Comment lines for the text formats (TSV and `.dat`).
    pub fn header(&self) -> String {
        format!(
            "# job: {}\n# mdim-core {}\n",
            serde_json::to_string(self).expect("job spec serializes"),
            mdim_core::VERSION
        )
    }

    /// Adds `job` and `version` to a JSON object.
    pub fn wrap(&self, body: Value) -> Value {
        let mut obj = match body {
            Value::Object(m) => m,
            other => {
                let mut m = serde_json::Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        obj.insert("job".into(), serde_json::to_value(self).expect("job spec serializes"));
        obj.insert("version".into(), Value::String(mdim_core::VERSION.into()));
        Value::Object(obj)
    }
}

/// Writes to `--out` when given, stdout otherwise.
pub fn emit(g: &Globals, text: &str) -> CliResult<()> {
    match &g.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn emit_json(g: &Globals, job: &JobSpec, body: Value) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(&job.wrap(body))?;
    s.push('\n');
    emit(g, &s)
}
