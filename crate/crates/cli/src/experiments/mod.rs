//! One module per experiment; each turns a resolved config into an [`Outcome`].

mod boundedness;
mod error_scaling;
mod headon;
mod identities;
mod initial_data;
mod kdv_soliton;
mod overtaking;
mod residual_scaling;
mod transport_wave;

use longwave::modulation::{soliton, Chirality, ModelLevel, ModulationState};
use longwave::spectral::{Field, Grid};

use crate::config::{Direction, Experiment, ExperimentConfig, Recipe};
use crate::outcome::{Outcome, RunError, StageExt};

pub(crate) fn dispatch(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    match cfg.experiment {
        Experiment::Identities => identities::run(cfg),
        Experiment::KdvSoliton => kdv_soliton::run(cfg),
        Experiment::TransportWave => transport_wave::run(cfg),
        Experiment::ResidualScaling => residual_scaling::run(cfg),
        Experiment::ErrorScaling => error_scaling::run(cfg),
        Experiment::Boundedness => boundedness::run(cfg),
        Experiment::HeadonCollision => headon::run(cfg),
        Experiment::Overtaking => overtaking::run(cfg),
        Experiment::InitialData => initial_data::run(cfg),
    }
}

fn grid(cfg: &ExperimentConfig) -> Result<Grid, RunError> {
    Grid::new(cfg.n, cfg.length, cfg.origin()).stage(|| "grid".into())
}

fn chirality(d: Direction) -> Chirality {
    match d {
        Direction::Right => Chirality::Right,
        Direction::Left => Chirality::Left,
    }
}

/// One soliton of the recipe.
#[derive(Debug, Clone, Copy)]
struct Wave {
    amplitude: f64,
    center: f64,
    direction: Direction,
}

fn waves(cfg: &ExperimentConfig) -> Vec<Wave> {
    match &cfg.recipe {
        Recipe::Solitons { amplitudes, centers, directions } => amplitudes
            .iter()
            .zip(centers)
            .zip(directions)
            .map(|((&amplitude, &center), &direction)| Wave { amplitude, center, direction })
            .collect(),
        _ => vec![],
    }
}

/// Sum of the recipe's solitons moving in `dir`.
fn profile(cfg: &ExperimentConfig, g: Grid, dir: Direction) -> Result<Field, RunError> {
    let mut f = Field::zeros(g);
    for w in waves(cfg).into_iter().filter(|w| w.direction == dir) {
        f = f + soliton(g, w.amplitude, w.center, chirality(dir)).stage(|| "initial soliton".into())?;
    }
    Ok(f)
}

/// Head-on data `U(beta, 0)`, `V(beta, 0)` from the recipe, optionally without the left movers.
fn modulation_state(cfg: &ExperimentConfig, eps: f64, right_only: bool) -> Result<ModulationState, RunError> {
    let g = grid(cfg)?;
    let u = profile(cfg, g, Direction::Right)?;
    let v = if right_only { Field::zeros(g) } else { profile(cfg, g, Direction::Left)? };
    ModulationState::from_profiles(eps, ModelLevel::Full, u, v, None, None).stage(|| format!("initial state eps={eps}"))
}

/// `tau` at which the right- and left-moving centres meet (both move at unit speed in `tau`).
fn collision_tau(cfg: &ExperimentConfig) -> f64 {
    let ws = waves(cfg);
    let r = ws.iter().find(|w| w.direction == Direction::Right).map_or(0.0, |w| w.center);
    let l = ws.iter().find(|w| w.direction == Direction::Left).map_or(0.0, |w| w.center);
    (0.5 * (l - r)).max(0.0)
}

/// Peak value and position of a band-limited field, refined by golden-section search.
fn refined_peak(f: &Field) -> (f64, f64) {
    let i = f.argmax();
    let n = f.len();
    let v = f.values();
    let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
    let den = a - 2.0 * b + c;
    let off = if den != 0.0 { (0.5 * (a - c) / den).clamp(-1.0, 1.0) } else { 0.0 };
    let h = f.grid().spacing();
    let x0 = f.grid().point(i) + off * h;
    let (mut lo, mut hi) = (x0 - h, x0 + h);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let m1 = hi - r * (hi - lo);
        let m2 = lo + r * (hi - lo);
        if f.eval_at(m1) > f.eval_at(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let x = 0.5 * (lo + hi);
    (f.eval_at(x), x)
}

fn eps_label(eps: f64) -> String {
    format!("{eps:.3}")
}
