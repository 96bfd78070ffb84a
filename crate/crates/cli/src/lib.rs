//! Configuration-driven runner for the longwave experiments.
//!
//! A run resolves an [`ExperimentConfig`], executes one experiment (fanning eps
//! ladders out over a rayon pool), and writes CSV tables, JSON summaries, SVG plots
//! and a [`RunManifest`] with checksums into one output directory.

pub mod config;
pub mod experiments;
pub mod manifest;
pub mod outcome;
pub mod plot;
mod runner;

pub use config::{ConfigError, Direction, Experiment, ExperimentConfig, Recipe};
pub use manifest::{verify_manifest, ArtifactRecord, RunManifest};
pub use outcome::{Artifact, Check, Outcome, RunError};
pub use runner::{execute, run, write_run};
