use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use super::state::ModulationState;
use super::system::{Components, ModelLevel, COMPONENT_NAMES};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::{io, Grid};

/// Manifest stored next to the binary snapshots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryManifest {
    pub eps: f64,
    pub level: ModelLevel,
    pub grid: Grid,
    /// Intermediate times `tau` of the snapshots.
    pub times: Vec<f64>,
    pub scheme: String,
    pub dt: f64,
    pub components: Vec<String>,
    /// Relative file names, one row per snapshot, one column per component.
    pub files: Vec<Vec<String>>,
}

pub const MANIFEST_NAME: &str = "manifest.json";

/// Writes every snapshot as binary fields plus `manifest.json`.
pub fn save_trajectory(
    traj: &Trajectory<ModulationState>,
    dir: &Path,
    scheme: &str,
    dt: f64,
) -> Result<TrajectoryManifest> {
    let (_, first) = traj.iter().next().ok_or_else(|| Error::InvalidArgument("empty trajectory".into()))?;
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for (i, (_, state)) in traj.iter().enumerate() {
        let mut row = Vec::new();
        for (name, field) in COMPONENT_NAMES.iter().zip(state.fields().as_array()) {
            let file = format!("snap_{i:05}_{name}.bin");
            io::write_binary(field, &dir.join(&file))?;
            row.push(file);
        }
        files.push(row);
    }
    let manifest = TrajectoryManifest {
        eps: first.eps(),
        level: first.level(),
        grid: *first.grid(),
        times: traj.times().to_vec(),
        scheme: scheme.to_string(),
        dt,
        components: COMPONENT_NAMES.iter().map(|s| s.to_string()).collect(),
        files,
    };
    fs::write(dir.join(MANIFEST_NAME), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

pub fn load_trajectory(dir: &Path) -> Result<(TrajectoryManifest, Trajectory<ModulationState>)> {
    let manifest: TrajectoryManifest = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_NAME))?)?;
    let mut traj = Trajectory::new();
    for (tau, row) in manifest.times.iter().zip(&manifest.files) {
        if row.len() != 8 {
            return Err(Error::Format(format!("snapshot at tau={tau} lists {} files", row.len())));
        }
        let fields: Vec<_> = row.iter().map(|f| io::read_binary(&dir.join(f))).collect::<Result<_>>()?;
        let arr: [_; 8] = fields.try_into().expect("checked length");
        traj.push(*tau, ModulationState::new(manifest.eps, *tau, manifest.level, Components::from_array(arr))?)?;
    }
    Ok((manifest, traj))
}
