use longwave::approximant::{assemble_frame, split_initial_data, Fidelity, InitialConvention};
use longwave::modulation::ModelLevel;
use longwave::residual::fit_slope;
use longwave::spectral::Field;
use serde_json::json;

use super::grid;
use crate::config::{ExperimentConfig, Recipe};
use crate::outcome::{csv_table, num, Artifact, Check, Outcome, RunError, StageExt};
use crate::plot::{Plot, Series};

pub(super) fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let g = grid(cfg)?;
    let Recipe::Theta { y_amplitude, y_width, u_amplitude, u_center, u_width } = cfg.recipe else {
        unreachable!("validated recipe kind");
    };
    let ty = Field::from_fn(g, |x| y_amplitude * (-(x / y_width).powi(2)).exp()).d();
    let tu = Field::from_fn(g, |x| u_amplitude * (-((x - u_center) / u_width).powi(2)).exp());
    let map = split_initial_data(&ty, &tu, cfg.eps_ladder[0]).stage(|| "split initial data".into())?;
    let mut rows = vec![];
    for &eps in &cfg.eps_ladder {
        let a = g.stretched(eps).stage(|| format!("alpha grid eps={eps}"))?;
        let s =
            map.to_state(eps, ModelLevel::Full, InitialConvention::Correctors).stage(|| format!("state eps={eps}"))?;
        let fr = assemble_frame(&s, 0.0, &a, Fidelity::Simple).stage(|| format!("frame eps={eps}"))?;
        let lead = (eps * eps) * &ty.relabel(a).stage(|| "relabel".into())?;
        let first = (&fr.psi_y - &lead).sobolev(cfg.s);
        let (ry, ru) = map.reparameterized(eps).stage(|| format!("reparameterized data eps={eps}"))?;
        let second = (&fr.psi_y - &ry).sobolev(0.0).max((&fr.psi_u - &ru).sobolev(0.0));
        rows.push([eps, first, second]);
    }
    let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
    let r1 = fit_slope(&cfg.eps_ladder, &col(1)).stage(|| "remainder slope fit".into())?;
    let r2 = fit_slope(&cfg.eps_ladder, &col(2)).stage(|| "reparameterized slope fit".into())?;
    let checks = vec![
        Check::at_least("remainder_slope", r1.slope, cfg.threshold("remainder_slope_min")),
        Check::at_least("reparameterized_slope", r2.slope, cfg.threshold("reparameterized_slope_min")),
    ];
    let table = csv_table(
        &["eps", "first_order_remainder", "reparameterized_remainder"],
        rows.iter().map(|r| r.iter().map(|v| num(*v)).collect::<Vec<_>>()),
    );
    let pts = |k: usize| rows.iter().map(|r| (r[0], r[k])).collect::<Vec<_>>();
    let plot = Plot::new("Initial-data round trip", "eps", "remainder")
        .log_log()
        .with(Series::new(format!("psi_y - eps^2 Theta_y ({:.2})", r1.slope), pts(1)))
        .with(Series::new(format!("against reparameterized ({:.2})", r2.slope), pts(2)));
    Ok(Outcome {
        checks,
        artifacts: vec![
            Artifact::new("initial_data.csv", table),
            Artifact::json("slopes.json", &json!({ "remainder": r1, "reparameterized": r2 })),
            Artifact::new("initial_data.svg", plot.to_svg()),
        ],
        diagnostics: json!({ "x2_drift": map.x2_drift, "f0_max": map.f0.max_abs(), "g0_max": map.g0.max_abs() }),
    })
}
