use longwave::modulation::{kdv_evolve, transport_evolve, Chirality};
use serde_json::json;

use super::{collision_tau, grid, profile};
use crate::config::{Direction, ExperimentConfig};
use crate::outcome::{csv_table, num, Artifact, Check, Outcome, RunError, StageExt};
use crate::plot::{Plot, Series};

/// Half-width in `tau` of the window checked around the collision.
const WINDOW: f64 = 4.0;

pub(super) fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let g = grid(cfg)?;
    let eps = cfg.eps;
    let tau_end = cfg.t0;
    let t_end = eps * eps * tau_end;
    let u =
        kdv_evolve(&profile(cfg, g, Direction::Right)?, Chirality::Right, t_end, cfg.dt).stage(|| "kdv U".into())?;
    let v = kdv_evolve(&profile(cfg, g, Direction::Left)?, Chirality::Left, t_end, cfg.dt).stage(|| "kdv V".into())?;
    let sol = transport_evolve(&u, &v, eps, tau_end, cfg.dtau).stage(|| "transport".into())?;
    let states = sol.trajectory.states();
    let times = sol.trajectory.times();
    let h = cfg.dtau;
    let tc = collision_tau(cfg);
    let first = (((tc - WINDOW) / h).round().max(2.0)) as usize;
    let last = (((tc + WINDOW) / h).round() as usize).min(states.len().saturating_sub(3));
    let step = ((0.25 / h).round() as usize).max(1);

    let mut rows = vec![];
    let mut worst = 0.0_f64;
    let mut peak = 0.0_f64;
    for i in (first..=last).step_by(step) {
        let p = |j: usize| states[j].total();
        let ptt = (1.0 / (12.0 * h * h))
            * &(-1.0 * &p(i - 2) + 16.0 * &p(i - 1) - 30.0 * &p(i) + 16.0 * &p(i + 1) - p(i + 2));
        let tau = times[i];
        let t = eps * eps * tau;
        let ul = u.sample(t).stage(|| format!("U at tau={tau}"))?.shift(-tau);
        let vl = v.sample(t).stage(|| format!("V at tau={tau}"))?.shift(tau);
        let defect = (ptt - p(i).derivative(2) - 3.0 * &(&ul * &vl).derivative(2)).sobolev(0.0);
        let size = p(i).max_abs();
        worst = worst.max(defect);
        peak = peak.max(size);
        rows.push([tau, defect, size]);
    }
    let checks = vec![Check::at_most("wave_equation_defect", worst, cfg.threshold("defect_max"))];
    let table = csv_table(
        &["tau", "defect", "transport_max"],
        rows.iter().map(|r| r.iter().map(|v| num(*v)).collect::<Vec<_>>()),
    );
    let plot = Plot::new("Wave-equation defect of P- + P+", "tau", "L2 defect")
        .log_y()
        .with(Series::new("defect", rows.iter().map(|r| (r[0], r[1])).collect()));
    Ok(Outcome {
        checks,
        artifacts: vec![Artifact::new("transport_wave.csv", table), Artifact::new("transport_wave.svg", plot.to_svg())],
        diagnostics: json!({
            "collision_tau": tc,
            "samples": rows.len(),
            "transport_peak": peak,
            "final_boundary_magnitude": states.last().map_or(0.0, |s| s.p_minus.boundary_magnitude().max(s.p_plus.boundary_magnitude())),
        }),
    })
}
