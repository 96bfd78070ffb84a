use longwave::modulation::{kdv_evolve_strided, soliton, soliton_speed};
use serde_json::json;

use super::{chirality, grid, waves};
use crate::config::ExperimentConfig;
use crate::outcome::{csv_table, num, Artifact, Check, Outcome, RunError, StageExt};
use crate::plot::{Plot, Series};

pub(super) fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let g = grid(cfg)?;
    let w = waves(cfg)[0];
    let chi = chirality(w.direction);
    let w0 = soliton(g, w.amplitude, w.center, chi).stage(|| "initial soliton".into())?;
    let traj = kdv_evolve_strided(&w0, chi, cfg.t0, cfg.dt, cfg.sample_every).stage(|| "kdv evolve".into())?;
    let speed = soliton_speed(w.amplitude, chi);
    let m0 = w0.integral();
    let e0 = w0.square().integral();
    let mut rows = vec![];
    let (mut mass, mut energy, mut shape) = (0.0_f64, 0.0_f64, 0.0);
    for (t, f) in traj.iter() {
        let exact = soliton(g, w.amplitude, w.center + speed * t, chi).stage(|| "exact soliton".into())?;
        shape = (f - &exact).sobolev(0.0);
        let dm = (f.integral() - m0).abs() / m0.abs();
        let de = (f.square().integral() - e0).abs() / e0;
        mass = mass.max(dm);
        energy = energy.max(de);
        rows.push([t, shape, dm, de]);
    }
    let (_, last) = traj.last().expect("trajectory holds the initial state");
    let checks = vec![
        Check::at_most("shape_error", shape, cfg.threshold("shape_error_max")),
        Check::at_most("mass_drift", mass, cfg.threshold("mass_drift_max")),
        Check::at_most("energy_drift", energy, cfg.threshold("energy_drift_max")),
    ];
    let table = csv_table(
        &["t", "shape_error", "mass_drift", "energy_drift"],
        rows.iter().map(|r| r.iter().map(|v| num(*v)).collect::<Vec<_>>()),
    );
    let plot = Plot::new("Soliton shape error", "T", "L2 error")
        .log_y()
        .with(Series::new("shape error", rows.iter().map(|r| (r[0], r[1])).collect()));
    Ok(Outcome {
        checks,
        artifacts: vec![Artifact::new("kdv_soliton.csv", table), Artifact::new("kdv_soliton.svg", plot.to_svg())],
        diagnostics: json!({
            "samples": traj.len(),
            "final_spectral_tail": last.spectral_tail(),
            "final_boundary_magnitude": last.boundary_magnitude(),
        }),
    })
}
