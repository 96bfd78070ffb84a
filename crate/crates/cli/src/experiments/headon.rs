use longwave::approximant::{assemble_frame, Fidelity};
use longwave::modulation::Hierarchy;
use serde_json::json;

use super::{collision_tau, modulation_state, refined_peak};
use crate::config::ExperimentConfig;
use crate::outcome::{csv_table, num, Artifact, Check, Outcome, RunError, StageExt};
use crate::plot::{Plot, Series};

/// Half-width in `tau` of the sampled window around the collision.
const WINDOW: f64 = 2.0;

pub(super) fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let eps = cfg.eps;
    let state = modulation_state(cfg, eps, false)?;
    let alpha = state.grid().stretched(eps).stage(|| "alpha grid".into())?;
    // isolated second-order peak, before the waves meet
    let isolated = {
        let f0 = assemble_frame(&state, 0.0, &alpha, Fidelity::Extended).stage(|| "extended frame at tau=0".into())?;
        refined_peak(&f0.psi_y).0
    };
    let mut h = Hierarchy::new(state, cfg.dtau).stage(|| "hierarchy".into())?;
    let tc = collision_tau(cfg);
    let start = (tc - WINDOW).max(0.0);
    let every = cfg.dtau * cfg.sample_every as f64;
    let samples = ((tc + WINDOW - start) / every).round() as usize;

    let mut rows = vec![];
    for i in 0..=samples {
        let tau = start + i as f64 * every;
        h.advance_to(tau).stage(|| format!("hierarchy to tau={tau}"))?;
        let s = h.state();
        let t = s.physical_time();
        // eps^2 (U + V) in laboratory variables
        let c = s.fields();
        let linear = (eps * eps) * &(&c.u + &c.v).relabel(alpha).stage(|| "relabel".into())?;
        let second =
            assemble_frame(s, t, &alpha, Fidelity::Extended).stage(|| format!("extended frame at tau={tau}"))?;
        let (a, xa) = refined_peak(&linear);
        let (b, xb) = refined_peak(&second.psi_y);
        rows.push([s.tau(), t, a, b, xa, xb]);
    }
    let peak = |k: usize| rows.iter().max_by(|p, q| p[k].total_cmp(&q[k])).expect("window holds samples");
    let (ra, rb) = (peak(2), peak(3));
    let excess = rb[3] - ra[2];
    let checks = vec![Check::above("runup_excess", excess, cfg.threshold("runup_excess_min"))];
    let table = csv_table(
        &["tau", "t", "max_linear_superposition", "max_psi_y_second_order", "alpha_linear", "alpha_second_order"],
        rows.iter().map(|r| r.iter().map(|v| num(*v)).collect::<Vec<_>>()),
    );
    let plot = Plot::new("Peak surface height through a head-on collision", "tau", "max psi_y")
        .with(Series::new("linear superposition", rows.iter().map(|r| (r[0], r[2])).collect()))
        .with(Series::new("second order", rows.iter().map(|r| (r[0], r[3])).collect()));
    Ok(Outcome {
        checks,
        artifacts: vec![Artifact::new("peak_runup.csv", table), Artifact::new("peak_runup.svg", plot.to_svg())],
        diagnostics: json!({
            "collision_tau": tc,
            "runup_linear": { "value": ra[2], "tau": ra[0], "alpha": ra[4] },
            "runup_second_order": { "value": rb[3], "tau": rb[0], "alpha": rb[5] },
            "excess_over_eps4": excess / eps.powi(4),
            "isolated_peak_second_order": isolated,
            "runup_over_isolated_pair_over_eps4": (rb[3] - 2.0 * isolated) / eps.powi(4),
        }),
    })
}
