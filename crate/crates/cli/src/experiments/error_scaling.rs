use longwave::residual::fit_slope;
use longwave::ww::{track_errors, ErrorStudy, ErrorStudyOptions, WwOptions};
use rayon::prelude::*;
use serde_json::json;

use super::{eps_label, modulation_state};
use crate::config::ExperimentConfig;
use crate::outcome::{csv_table, num, Artifact, Check, Outcome, RunError, StageExt};
use crate::plot::{Plot, Series};

fn study(cfg: &ExperimentConfig, eps: f64) -> Result<ErrorStudy, RunError> {
    let s = modulation_state(cfg, eps, false)?;
    let opts = ErrorStudyOptions {
        t_end: cfg.t0 / eps.powi(3),
        dt: cfg.dt,
        sample_every: cfg.sample_every,
        dtau: cfg.dtau,
        s: cfg.s,
        ww: WwOptions::default(),
    };
    track_errors(&s, &opts).stage(|| format!("reference run eps={eps}"))
}

pub(super) fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let studies = cfg.eps_ladder.par_iter().map(|&e| study(cfg, e)).collect::<Result<Vec<_>, RunError>>()?;
    let ext: Vec<f64> = studies.iter().map(|s| s.extended.sup()).collect();
    let kdv: Vec<f64> = studies.iter().map(|s| s.kdv_only.sup()).collect();
    let fit = fit_slope(&cfg.eps_ladder, &ext).stage(|| "extended slope fit".into())?;
    let kfit = fit_slope(&cfg.eps_ladder, &kdv).stage(|| "KdV-only slope fit".into())?;
    let target = cfg.threshold("ratio_at_eps");
    let at = (0..studies.len())
        .min_by(|&a, &b| (cfg.eps_ladder[a] - target).abs().total_cmp(&(cfg.eps_ladder[b] - target).abs()))
        .expect("ladder is not empty");
    let ratio = kdv[at] / ext[at];

    let checks = vec![
        Check::at_least("extended_slope_min", fit.slope, cfg.threshold("slope_min")),
        Check::at_most("extended_slope_max", fit.slope, cfg.threshold("slope_max")),
        Check::at_least("kdv_over_extended", ratio, cfg.threshold("ratio_min")),
        Check::at_least("kdv_slope_min", kfit.slope, cfg.threshold("kdv_slope_min")),
        Check::at_most("kdv_slope_max", kfit.slope, cfg.threshold("kdv_slope_max")),
        Check::above("slope_order", fit.slope - kfit.slope, 0.0),
    ];
    let mut artifacts = vec![Artifact::new(
        "error_scaling.csv",
        csv_table(
            &["eps", "sup_extended", "sup_kdv_only", "ratio", "max_iterations", "min_denominator", "max_boundary"],
            studies.iter().map(|s| {
                vec![
                    num(s.eps),
                    num(s.extended.sup()),
                    num(s.kdv_only.sup()),
                    num(s.kdv_only.sup() / s.extended.sup()),
                    s.max_iterations.to_string(),
                    num(s.min_denominator),
                    num(s.max_boundary),
                ]
            }),
        ),
    )];
    for s in &studies {
        artifacts.push(Artifact::new(format!("error_curve_extended_eps{}.csv", eps_label(s.eps)), s.extended.to_csv()));
        artifacts.push(Artifact::new(format!("error_curve_kdv_eps{}.csv", eps_label(s.eps)), s.kdv_only.to_csv()));
    }
    artifacts.push(Artifact::json(
        "slopes.json",
        &json!({ "extended": fit, "kdv_only": kfit, "ratio": { "eps": cfg.eps_ladder[at], "value": ratio } }),
    ));
    let pts = |v: &[f64]| cfg.eps_ladder.iter().copied().zip(v.iter().copied()).collect::<Vec<_>>();
    artifacts.push(Artifact::new(
        "error_scaling.svg",
        Plot::new("Sup error against the reference solver", "eps", "sup error")
            .log_log()
            .with(Series::new(format!("extended ({:.2})", fit.slope), pts(&ext)))
            .with(Series::new(format!("KdV-only ({:.2})", kfit.slope), pts(&kdv)))
            .to_svg(),
    ));
    let mut curves = Plot::new("Combined error along each run", "t", "error").log_y();
    for s in &studies {
        let c = &s.extended;
        curves = curves.with(Series::new(
            format!("eps {}", eps_label(s.eps)),
            c.times.iter().copied().zip(c.combined.iter().copied()).collect(),
        ));
    }
    artifacts.push(Artifact::new("error_curves.svg", curves.to_svg()));
    Ok(Outcome {
        checks,
        artifacts,
        diagnostics: json!({
            "runs": studies.iter().map(|s| json!({
                "eps": s.eps,
                "max_iterations": s.max_iterations,
                "min_denominator": s.min_denominator,
                "max_boundary": s.max_boundary,
                "samples": s.extended.times.len(),
            })).collect::<Vec<_>>(),
        }),
    })
}
