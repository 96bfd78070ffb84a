//! Experiment configuration: TOML parsing, per-experiment defaults and validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Identities,
    KdvSoliton,
    TransportWave,
    ResidualScaling,
    ErrorScaling,
    Boundedness,
    HeadonCollision,
    Overtaking,
    InitialData,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::Identities,
        Experiment::KdvSoliton,
        Experiment::TransportWave,
        Experiment::ResidualScaling,
        Experiment::ErrorScaling,
        Experiment::Boundedness,
        Experiment::HeadonCollision,
        Experiment::Overtaking,
        Experiment::InitialData,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Identities => "identities",
            Experiment::KdvSoliton => "kdv-soliton",
            Experiment::TransportWave => "transport-wave",
            Experiment::ResidualScaling => "residual-scaling",
            Experiment::ErrorScaling => "error-scaling",
            Experiment::Boundedness => "boundedness",
            Experiment::HeadonCollision => "headon-collision",
            Experiment::Overtaking => "overtaking",
            Experiment::InitialData => "initial-data",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    pub fn summary(self) -> &'static str {
        match self {
            Experiment::Identities => "operator identities and the long-wave truncation slope",
            Experiment::KdvSoliton => "soliton translation and conservation for the KdV stepper",
            Experiment::TransportWave => "transport fields against the inhomogeneous wave equation",
            Experiment::ResidualScaling => {
                "residual norms of the extended and KdV-only approximants over an eps ladder"
            }
            Experiment::ErrorScaling => "reference water-wave runs against both approximants over an eps ladder",
            Experiment::Boundedness => "growth of correctors, transport fields and W3 through a collision",
            Experiment::HeadonCollision => "peak run-up of a head-on collision, first versus second order",
            Experiment::Overtaking => "overtaking two-soliton run: amplitude recurrence and phase shifts",
            Experiment::InitialData => "initial-data map round trip at t = 0",
        }
    }

    /// Experiments that fit a slope across `eps_ladder`.
    pub fn uses_ladder(self) -> bool {
        matches!(
            self,
            Experiment::Identities | Experiment::ResidualScaling | Experiment::ErrorScaling | Experiment::InitialData
        )
    }

    pub fn default_config(self) -> ExperimentConfig {
        let ladder5 = vec![0.05, 0.07, 0.1, 0.14, 0.2];
        let headon = |c: f64| Recipe::Solitons {
            amplitudes: vec![1.0, 1.0],
            centers: vec![-c, c],
            directions: vec![Direction::Right, Direction::Left],
        };
        let th = |pairs: &[(&str, f64)]| pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let base = ExperimentConfig {
            experiment: self,
            eps_ladder: vec![],
            eps: 0.1,
            n: 512,
            length: 80.0,
            origin: None,
            s: 4.0,
            sobolev_indices: vec![],
            t0: 1.0,
            dt: 0.01,
            dtau: 0.02,
            sample_every: 1,
            recipe: Recipe::None,
            seed: 0,
            thresholds: BTreeMap::new(),
            output_dir: None,
        };
        match self {
            Experiment::Identities => ExperimentConfig {
                eps_ladder: ladder5,
                n: 512,
                length: 40.0,
                seed: 2024,
                thresholds: th(&[
                    ("trig_identity_max", 1e-12),
                    ("composition_max", 1e-12),
                    ("workhorse_slope_min", 6.4),
                ]),
                ..base
            },
            Experiment::KdvSoliton => ExperimentConfig {
                t0: 2.0,
                dt: 0.01,
                sample_every: 20,
                recipe: Recipe::Solitons {
                    amplitudes: vec![1.0],
                    centers: vec![0.0],
                    directions: vec![Direction::Right],
                },
                thresholds: th(&[("shape_error_max", 1e-6), ("mass_drift_max", 1e-8), ("energy_drift_max", 1e-8)]),
                ..base
            },
            Experiment::TransportWave => ExperimentConfig {
                eps: 0.1,
                t0: 20.0,
                dt: 1e-3,
                dtau: 0.01,
                recipe: headon(10.0),
                thresholds: th(&[("defect_max", 1e-6)]),
                ..base
            },
            Experiment::ResidualScaling => ExperimentConfig {
                eps_ladder: ladder5,
                n: 1024,
                length: 60.0,
                t0: 1.0,
                recipe: headon(1.0),
                thresholds: th(&[
                    ("res_u_slope_min", 8.0),
                    ("res_y_slope_min", 8.0),
                    ("res_z_max", 1e-10),
                    ("baseline_slope_min", 6.0),
                    ("baseline_slope_max", 7.0),
                    ("gap_min", 1.5),
                ]),
                ..base
            },
            Experiment::ErrorScaling => ExperimentConfig {
                eps_ladder: vec![0.2, 0.25, 0.3, 0.35],
                n: 512,
                length: 64.0,
                t0: 0.5,
                dt: 0.05,
                sample_every: 10,
                recipe: headon(2.0),
                thresholds: th(&[
                    ("slope_min", 4.8),
                    ("slope_max", 6.2),
                    ("ratio_min", 5.0),
                    ("ratio_at_eps", 0.25),
                    ("kdv_slope_min", 3.0),
                    ("kdv_slope_max", 4.5),
                ]),
                ..base
            },
            Experiment::Boundedness => ExperimentConfig {
                eps: 0.2,
                n: 1024,
                length: 120.0,
                t0: 1.0,
                sample_every: 5,
                sobolev_indices: vec![0.0, 2.0, 4.0],
                recipe: headon(10.0),
                thresholds: th(&[("growth_max", 10.0)]),
                ..base
            },
            Experiment::HeadonCollision => ExperimentConfig {
                eps: 0.1,
                n: 1024,
                length: 60.0,
                recipe: headon(5.0),
                thresholds: th(&[("runup_excess_min", 0.0)]),
                ..base
            },
            Experiment::Overtaking => ExperimentConfig {
                n: 1024,
                length: 160.0,
                origin: Some(-40.0),
                t0: 40.0,
                dt: 0.01,
                sample_every: 100,
                recipe: Recipe::Solitons {
                    amplitudes: vec![2.0, 0.5],
                    centers: vec![-10.0, 0.0],
                    directions: vec![Direction::Right, Direction::Right],
                },
                thresholds: th(&[("amplitude_tol", 1e-3), ("phase_shift_min", 0.1)]),
                ..base
            },
            Experiment::InitialData => ExperimentConfig {
                eps_ladder: ladder5,
                n: 512,
                length: 60.0,
                recipe: Recipe::Theta { y_amplitude: 2.0, y_width: 2.0, u_amplitude: 1.0, u_center: 0.5, u_width: 1.5 },
                thresholds: th(&[("remainder_slope_min", 3.4), ("reparameterized_slope_min", 5.3)]),
                ..base
            },
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Right,
    Left,
}

/// Initial data of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Recipe {
    None,
    /// Sum of `A sech^2` solitons in the slow variable.
    Solitons {
        amplitudes: Vec<f64>,
        centers: Vec<f64>,
        directions: Vec<Direction>,
    },
    /// `Theta_y = a_y d/dbeta exp(-(beta / w_y)^2)`, `Theta_u = a_u exp(-((beta - c_u) / w_u)^2)`.
    Theta {
        y_amplitude: f64,
        y_width: f64,
        u_amplitude: f64,
        u_center: f64,
        u_width: f64,
    },
}

impl Recipe {
    fn kind(&self) -> &'static str {
        match self {
            Recipe::None => "none",
            Recipe::Solitons { .. } => "solitons",
            Recipe::Theta { .. } => "theta",
        }
    }
}

/// A fully resolved configuration.
///
/// Times are in the variables natural to each experiment: `t0` is `T` for the KdV
/// runs, `tau` for the transport and residual runs, and the multiplier of `eps^-3`
/// (reference runs) or `eps^-2` (boundedness) otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub eps_ladder: Vec<f64>,
    pub eps: f64,
    pub n: usize,
    /// Period of the slow-variable grid.
    pub length: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<f64>,
    pub s: f64,
    pub sobolev_indices: Vec<f64>,
    pub t0: f64,
    pub dt: f64,
    pub dtau: f64,
    pub sample_every: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub thresholds: BTreeMap<String, f64>,
    pub recipe: Recipe,
}

/// What a config file may contain; every field but `experiment` is optional.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: String,
    eps_ladder: Option<Vec<f64>>,
    eps: Option<f64>,
    n: Option<usize>,
    length: Option<f64>,
    origin: Option<f64>,
    s: Option<f64>,
    sobolev_indices: Option<Vec<f64>>,
    t0: Option<f64>,
    dt: Option<f64>,
    dtau: Option<f64>,
    sample_every: Option<usize>,
    seed: Option<u64>,
    #[serde(default)]
    thresholds: BTreeMap<String, f64>,
    output_dir: Option<PathBuf>,
    recipe: Option<Recipe>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("invalid config:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let experiment = Experiment::parse(&raw.experiment).ok_or_else(|| {
            let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
            ConfigError::Invalid(vec![format!("unknown experiment `{}` (known: {})", raw.experiment, names.join(", "))])
        })?;
        let mut cfg = experiment.default_config();
        let mut problems = vec![];
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = raw.$f { cfg.$f = v; } )* };
        }
        take!(eps_ladder, eps, n, length, s, sobolev_indices, t0, dt, dtau, sample_every, seed, recipe);
        if raw.origin.is_some() {
            cfg.origin = raw.origin;
        }
        cfg.output_dir = raw.output_dir;
        for (k, v) in raw.thresholds {
            match cfg.thresholds.get_mut(&k) {
                Some(slot) => *slot = v,
                None => problems.push(format!("unknown threshold `{k}` for {experiment}")),
            }
        }
        problems.extend(cfg.problems());
        if problems.is_empty() {
            Ok(cfg)
        } else {
            Err(ConfigError::Invalid(problems))
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    /// Checks every invariant; an empty list means the config is runnable.
    pub fn problems(&self) -> Vec<String> {
        let mut p = vec![];
        let e = self.experiment;
        let positive = |name: &str, v: f64, p: &mut Vec<String>| {
            if !(v > 0.0 && v.is_finite()) {
                p.push(format!("{name} must be positive and finite (got {v})"));
            }
        };
        if !(self.eps > 0.0 && self.eps < 1.0) {
            p.push(format!("eps must lie in (0, 1) (got {})", self.eps));
        }
        if e.uses_ladder() {
            if self.eps_ladder.len() < 4 {
                p.push(format!("eps_ladder needs at least 4 values for {e} (got {})", self.eps_ladder.len()));
            }
            if let Some(bad) = self.eps_ladder.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
                p.push(format!("eps_ladder value {bad} is outside (0, 1)"));
            }
            let lo = self.eps_ladder.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = self.eps_ladder.iter().copied().fold(0.0, f64::max);
            if e == Experiment::ResidualScaling && self.eps_ladder.len() >= 4 && hi < 3.0 * lo {
                p.push(format!("eps_ladder spans [{lo}, {hi}]; a slope fit needs a factor of 3"));
            }
        }
        if self.n < 16 || !self.n.is_power_of_two() {
            p.push(format!("n must be a power of two >= 16 (got {})", self.n));
        }
        positive("length", self.length, &mut p);
        positive("t0", self.t0, &mut p);
        positive("dt", self.dt, &mut p);
        positive("dtau", self.dtau, &mut p);
        if !(self.s >= 0.5 && self.s.is_finite()) {
            p.push(format!("s must be finite and at least 1/2 (got {})", self.s));
        }
        if let Some(o) = self.origin {
            if !o.is_finite() {
                p.push(format!("origin must be finite (got {o})"));
            }
        }
        if self.sample_every == 0 {
            p.push("sample_every must be at least 1".into());
        }
        if e == Experiment::Boundedness && self.sobolev_indices.is_empty() {
            p.push("boundedness needs at least one entry in sobolev_indices".into());
        }
        if let Some(bad) = self.sobolev_indices.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
            p.push(format!("sobolev index {bad} must be finite and non-negative"));
        }
        for (k, v) in &self.thresholds {
            if !v.is_finite() {
                p.push(format!("threshold `{k}` is not finite"));
            }
        }
        p.extend(self.recipe_problems());
        p
    }

    fn recipe_problems(&self) -> Vec<String> {
        let e = self.experiment;
        let want = match e {
            Experiment::Identities => "none",
            Experiment::InitialData => "theta",
            _ => "solitons",
        };
        if self.recipe.kind() != want {
            return vec![format!("{e} needs a recipe of kind `{want}` (got `{}`)", self.recipe.kind())];
        }
        let mut p = vec![];
        match &self.recipe {
            Recipe::None => {}
            Recipe::Theta { y_width, u_width, .. } => {
                if !(*y_width > 0.0 && *u_width > 0.0) {
                    p.push("theta widths must be positive".into());
                }
            }
            Recipe::Solitons { amplitudes, centers, directions } => {
                if amplitudes.is_empty() || amplitudes.len() != centers.len() || amplitudes.len() != directions.len() {
                    p.push(format!(
                        "soliton recipe needs equal, non-empty lists (amplitudes {}, centers {}, directions {})",
                        amplitudes.len(),
                        centers.len(),
                        directions.len()
                    ));
                    return p;
                }
                if let Some(a) = amplitudes.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
                    p.push(format!("soliton amplitude {a} must be positive"));
                }
                let lo = self.origin();
                for c in centers {
                    if !(*c > lo && *c < lo + self.length) {
                        p.push(format!("soliton center {c} lies outside the grid [{lo}, {}]", lo + self.length));
                    }
                }
                let rights = directions.iter().filter(|d| **d == Direction::Right).count();
                let lefts = directions.len() - rights;
                match e {
                    Experiment::KdvSoliton if directions.len() != 1 => {
                        p.push("kdv-soliton takes exactly one soliton".into())
                    }
                    Experiment::Overtaking if directions.len() != 2 || lefts != 0 => {
                        p.push("overtaking takes two solitons moving the same way (right)".into())
                    }
                    Experiment::Overtaking if amplitudes[0] <= amplitudes[1] || centers[0] >= centers[1] => {
                        p.push("overtaking needs the larger soliton behind the smaller one".into())
                    }
                    Experiment::TransportWave
                    | Experiment::Boundedness
                    | Experiment::HeadonCollision
                    | Experiment::ResidualScaling
                    | Experiment::ErrorScaling
                        if rights != 1 || lefts != 1 =>
                    {
                        p.push(format!("{e} takes one right-moving and one left-moving soliton"))
                    }
                    _ => {}
                }
            }
        }
        p
    }

    pub fn origin(&self) -> f64 {
        self.origin.unwrap_or(-0.5 * self.length)
    }

    pub fn threshold(&self, key: &str) -> f64 {
        *self.thresholds.get(key).unwrap_or_else(|| panic!("threshold `{key}` missing for {}", self.experiment))
    }

    /// SHA-256 of the canonical JSON form, ignoring `output_dir`.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        let bytes = serde_json::to_vec(&c).expect("config serializes to JSON");
        hex::encode(Sha256::digest(bytes))
    }
}
