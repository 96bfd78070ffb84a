use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::outcome::Check;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactRecord {
    /// Path relative to the run directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

impl ArtifactRecord {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        Self { path: path.into(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 }
    }
}

/// Index of a finished run; the manifest file itself is the only file it does not list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config_hash: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub artifacts: Vec<ArtifactRecord>,
    pub wall_clock_seconds: f64,
    pub threads: usize,
    pub diagnostics: serde_json::Value,
    pub crate_version: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Problems found when checking a run directory against its manifest.
///
/// Every listed file must exist with the recorded checksum, and every file in the
/// directory other than the manifest must be listed.
pub fn verify_manifest(dir: &Path) -> std::io::Result<Vec<String>> {
    let text = fs::read_to_string(dir.join(MANIFEST_FILE))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
    let mut problems = vec![];
    let mut listed = BTreeSet::new();
    for a in &manifest.artifacts {
        listed.insert(a.path.clone());
        match fs::read(dir.join(&a.path)) {
            Ok(bytes) if sha256_hex(&bytes) == a.sha256 => {}
            Ok(_) => problems.push(format!("{}: checksum differs from the manifest", a.path)),
            Err(e) => problems.push(format!("{}: {e}", a.path)),
        }
    }
    for entry in fs::read_dir(dir)? {
        let name = entry?.file_name().to_string_lossy().into_owned();
        if name != MANIFEST_FILE && !listed.contains(&name) {
            problems.push(format!("{name}: present but not in the manifest"));
        }
    }
    Ok(problems)
}
