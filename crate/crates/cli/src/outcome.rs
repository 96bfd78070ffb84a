use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::config::ConfigError;

/// One acceptance threshold applied to a measured value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `"<="`, `">="` or `">"`.
    pub relation: String,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, relation: "<=".into(), limit, pass: value <= limit }
    }

    pub fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, relation: ">=".into(), limit, pass: value >= limit }
    }

    pub fn above(name: &str, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, relation: ">".into(), limit, pass: value > limit }
    }

    pub fn describe(&self) -> String {
        format!(
            "{} = {:.6e} ({} {:e}) {}",
            self.name,
            self.value,
            self.relation,
            self.limit,
            if self.pass { "ok" } else { "FAILED" }
        )
    }
}

/// A named output file held in memory until the run directory is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn new(name: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        Self { name: name.into(), bytes: bytes.into() }
    }

    pub fn json(name: impl Into<String>, value: &serde_json::Value) -> Self {
        let mut bytes = serde_json::to_vec_pretty(value).expect("json value serializes");
        bytes.push(b'\n');
        Self::new(name, bytes)
    }
}

/// Everything an experiment produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub artifacts: Vec<Artifact>,
    /// Iteration counts, boundary magnitudes, spectral tails and similar.
    pub diagnostics: serde_json::Value,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver abort in {stage}: {source}")]
    Solver {
        stage: String,
        #[source]
        source: longwave::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    /// Process exit status: 2 for configuration and output problems, 3 for solver aborts.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io { .. } => 2,
            RunError::Solver { .. } => 3,
        }
    }
}

/// Attaches the stage name to a library error.
pub(crate) trait StageExt<T> {
    fn stage(self, stage: impl FnOnce() -> String) -> Result<T, RunError>;
}

impl<T> StageExt<T> for longwave::Result<T> {
    fn stage(self, stage: impl FnOnce() -> String) -> Result<T, RunError> {
        self.map_err(|source| RunError::Solver { stage: stage(), source })
    }
}

/// RFC 4180 table with a header row; numbers use the shortest round-trip form.
pub(crate) fn csv_table<R, I>(header: &[&str], rows: R) -> Vec<u8>
where
    R: IntoIterator<Item = I>,
    I: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(row).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

pub(crate) fn num(v: f64) -> String {
    format!("{v:e}")
}
