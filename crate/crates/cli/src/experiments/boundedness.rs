use longwave::modulation::{Hierarchy, MonitoredNorms};
use serde_json::json;

use super::{collision_tau, modulation_state};
use crate::config::ExperimentConfig;
use crate::outcome::{csv_table, num, Artifact, Check, Outcome, RunError, StageExt};
use crate::plot::{Plot, Series};

const NAMES: [&str; 5] = ["f", "g", "p_minus", "p_plus", "w3"];

fn watched(m: &MonitoredNorms) -> [f64; 5] {
    [m.f, m.g, m.p_minus, m.p_plus, m.w3]
}

pub(super) fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let eps = cfg.eps;
    let tau_end = cfg.t0 / (eps * eps);
    let mut h = Hierarchy::new(modulation_state(cfg, eps, false)?, cfg.dtau).stage(|| "hierarchy".into())?;
    let traj = h.run(tau_end, cfg.dtau * cfg.sample_every as f64).stage(|| "hierarchy run".into())?;
    let tc = collision_tau(cfg);
    let times = traj.times();
    let at_collision =
        (0..times.len()).min_by(|&a, &b| (times[a] - tc).abs().total_cmp(&(times[b] - tc).abs())).unwrap_or(0);

    let mut rows = vec![];
    let mut worst = [0.0_f64; 5];
    let mut growth_detail = vec![];
    let mut boundary = 0.0_f64;
    for (_, state) in traj.iter() {
        boundary = boundary.max(state.boundary_magnitude());
    }
    let mut plot = Plot::new("Monitored norms", "tau", "norm").log_y();
    for &s in &cfg.sobolev_indices {
        let norms: Vec<[f64; 5]> = traj.states().iter().map(|st| watched(&st.monitored_norms(s))).collect();
        let reference = norms[at_collision];
        for k in 0..5 {
            let peak = norms.iter().map(|r| r[k]).fold(0.0, f64::max);
            let g = if reference[k] > 0.0 {
                peak / reference[k]
            } else if peak == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst[k] = worst[k].max(g);
            growth_detail
                .push(json!({ "field": NAMES[k], "s": s, "at_collision": reference[k], "max": peak, "growth": g }));
        }
        for (t, r) in times.iter().zip(&norms) {
            let mut row = vec![num(*t), num(s)];
            row.extend(r.iter().map(|v| num(*v)));
            rows.push(row);
        }
        if Some(&s) == cfg.sobolev_indices.last() {
            for k in 0..5 {
                plot = plot.with(Series::new(
                    format!("{} (s={s})", NAMES[k]),
                    times.iter().copied().zip(norms.iter().map(|r| r[k])).collect(),
                ));
            }
        }
    }
    let limit = cfg.threshold("growth_max");
    let checks = NAMES.iter().zip(worst).map(|(n, g)| Check::at_most(&format!("growth_{n}"), g, limit)).collect();
    let mut header = vec!["tau", "s"];
    header.extend(NAMES);
    Ok(Outcome {
        checks,
        artifacts: vec![
            Artifact::new("boundedness.csv", csv_table(&header, rows)),
            Artifact::new("boundedness.svg", plot.to_svg()),
        ],
        diagnostics: json!({
            "collision_tau": times[at_collision],
            "tau_end": tau_end,
            "growth": growth_detail,
            "max_boundary_magnitude": boundary,
        }),
    })
}
