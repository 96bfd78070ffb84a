use std::fs;
use std::path::Path;
use std::time::Instant;

use crate::config::{ConfigError, ExperimentConfig};
use crate::experiments;
use crate::manifest::{ArtifactRecord, RunManifest, MANIFEST_FILE};
use crate::outcome::{Artifact, Outcome, RunError};

/// Runs the configured experiment in memory on the current rayon pool.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let problems = cfg.problems();
    if !problems.is_empty() {
        return Err(ConfigError::Invalid(problems).into());
    }
    experiments::dispatch(cfg)
}

/// Runs the experiment on a pool of `jobs` threads and writes every output into `out`.
pub fn run(cfg: &ExperimentConfig, out: &Path, jobs: Option<usize>) -> Result<RunManifest, RunError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| RunError::Config(ConfigError::Invalid(vec![format!("cannot start worker pool: {e}")])))?;
    let start = Instant::now();
    let outcome = pool.install(|| execute(cfg))?;
    let seconds = start.elapsed().as_secs_f64();
    write_run(cfg, &outcome, out, seconds, pool.current_num_threads())
}

/// Writes the artifacts, the resolved config and the manifest; the only writer of `out`.
pub fn write_run(
    cfg: &ExperimentConfig,
    outcome: &Outcome,
    out: &Path,
    wall_clock_seconds: f64,
    threads: usize,
) -> Result<RunManifest, RunError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    fs::create_dir_all(out).map_err(io(out))?;
    let mut files = vec![Artifact::new("config.resolved.toml", cfg.to_toml())];
    files.extend(outcome.artifacts.iter().cloned());
    let mut records = vec![];
    for a in &files {
        let path = out.join(&a.name);
        fs::write(&path, &a.bytes).map_err(io(&path))?;
        records.push(ArtifactRecord::of(&a.name, &a.bytes));
    }
    let manifest = RunManifest {
        experiment: cfg.experiment.name().into(),
        config_hash: cfg.hash(),
        passed: outcome.passed(),
        checks: outcome.checks.clone(),
        artifacts: records,
        wall_clock_seconds,
        threads,
        diagnostics: outcome.diagnostics.clone(),
        crate_version: env!("CARGO_PKG_VERSION").into(),
    };
    let path = out.join(MANIFEST_FILE);
    let mut text = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    text.push(b'\n');
    fs::write(&path, text).map_err(io(&path))?;
    Ok(manifest)
}
