use longwave::modulation::Hierarchy;
use longwave::residual::{fit_slope, kdv_only_residuals, state_residuals, ResidualSample, ScalingTable};
use rayon::prelude::*;
use serde_json::json;

use super::modulation_state;
use crate::config::ExperimentConfig;
use crate::outcome::{csv_table, num, Artifact, Check, Outcome, RunError, StageExt};
use crate::plot::{Plot, Series};

/// Full residual of the head-on family and KdV-only residual of its right-moving part, at `tau = t0`.
fn sample(cfg: &ExperimentConfig, eps: f64) -> Result<(ResidualSample, ResidualSample), RunError> {
    let advance = |right_only: bool| -> Result<_, RunError> {
        let s = modulation_state(cfg, eps, right_only)?;
        let mut h = Hierarchy::new(s, cfg.dtau).stage(|| format!("hierarchy eps={eps}"))?;
        h.advance_to(cfg.t0).stage(|| format!("hierarchy eps={eps}"))?;
        Ok(h.into_state())
    };
    let full = state_residuals(&advance(false)?, cfg.s).stage(|| format!("residuals eps={eps}"))?;
    let base = kdv_only_residuals(&advance(true)?, cfg.s).stage(|| format!("baseline residuals eps={eps}"))?;
    Ok((full, base))
}

pub(super) fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let pairs = cfg.eps_ladder.par_iter().map(|&e| sample(cfg, e)).collect::<Result<Vec<_>, RunError>>()?;
    let (full, base): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let base_u: Vec<f64> = base.iter().map(|b| b.res_u_norm).collect();
    let table = ScalingTable::from_samples(full).stage(|| "residual slope fit".into())?;
    let baseline = fit_slope(&cfg.eps_ladder, &base_u).stage(|| "baseline slope fit".into())?;
    let gap = table.res_u.slope - baseline.slope;
    let res_z = table.samples.iter().map(|s| s.res_z_norm).fold(0.0, f64::max);
    let min_den = table.samples.iter().map(|s| s.min_denominator).fold(f64::INFINITY, f64::min);

    let checks = vec![
        Check::at_least("res_u_slope", table.res_u.slope, cfg.threshold("res_u_slope_min")),
        Check::at_least("res_y_slope", table.res_y.slope, cfg.threshold("res_y_slope_min")),
        Check::at_most("res_z_max", res_z, cfg.threshold("res_z_max")),
        Check::at_least("baseline_slope_low", baseline.slope, cfg.threshold("baseline_slope_min")),
        Check::at_most("baseline_slope_high", baseline.slope, cfg.threshold("baseline_slope_max")),
        Check::at_least("slope_gap", gap, cfg.threshold("gap_min")),
    ];
    let csv = csv_table(
        &["eps", "res_z", "res_y", "res_u", "baseline_res_u", "min_denominator"],
        table.samples.iter().zip(&base_u).map(|(s, b)| {
            vec![num(s.eps), num(s.res_z_norm), num(s.res_y_norm), num(s.res_u_norm), num(*b), num(s.min_denominator)]
        }),
    );
    let slopes = json!({
        "res_z": table.res_z,
        "res_y": table.res_y,
        "res_u": table.res_u,
        "baseline_res_u": baseline,
        "gap": gap,
    });
    let pts = |f: fn(&ResidualSample) -> f64| table.samples.iter().map(|s| (s.eps, f(s))).collect::<Vec<_>>();
    let plot = Plot::new("Residual norms", "eps", "norm")
        .log_log()
        .with(Series::new(format!("Res_u ({:.2})", table.res_u.slope), pts(|s| s.res_u_norm)))
        .with(Series::new(format!("Res_y ({:.2})", table.res_y.slope), pts(|s| s.res_y_norm)))
        .with(Series::new(
            format!("KdV-only Res_u ({:.2})", baseline.slope),
            cfg.eps_ladder.iter().copied().zip(base_u.iter().copied()).collect(),
        ));
    Ok(Outcome {
        checks,
        artifacts: vec![
            Artifact::new("residual_scaling.csv", csv),
            Artifact::json("slopes.json", &slopes),
            Artifact::new("residual_scaling.svg", plot.to_svg()),
        ],
        diagnostics: json!({ "min_denominator": min_den, "tau": cfg.t0, "s": cfg.s }),
    })
}
