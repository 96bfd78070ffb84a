use longwave::residual::fit_slope;
use longwave::spectral::{apply, builtin_symbol, longwave_truncation, trig_identity_defect, Field, Grid, Truncated};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::grid;
use crate::config::ExperimentConfig;
use crate::outcome::{csv_table, num, Artifact, Check, Outcome, RunError, StageExt};
use crate::plot::{Plot, Series};

/// Sum of a few seeded Gaussian bumps well inside the period.
fn random_field(g: Grid, rng: &mut ChaCha8Rng) -> Field {
    let half = 0.25 * g.length();
    let mid = g.origin() + 0.5 * g.length();
    let bumps: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| (rng.random_range(-1.0..1.0), mid + rng.random_range(-half..half), rng.random_range(0.8..3.0)))
        .collect();
    Field::from_fn(g, move |x| bumps.iter().map(|(a, c, w)| a * (-((x - c) / w).powi(2)).exp()).sum())
}

pub(super) fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let op = |name: &str| builtin_symbol(name).stage(|| format!("symbol {name}"));
    let (k0, l, linv, d) = (op("K0")?, op("L")?, op("Linv")?, op("D")?);
    let g = grid(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut l_linv, mut k0_l) = (0.0_f64, 0.0_f64);
    for _ in 0..8 {
        let f = random_field(g, &mut rng);
        let back = apply(&l, &apply(&linv, &f).stage(|| "L^-1".into())?).stage(|| "L".into())?;
        l_linv = l_linv.max((&back - &f).max_abs() / f.max_abs());
        let kl = apply(&k0, &apply(&l, &f).stage(|| "L".into())?).stage(|| "K0".into())?;
        let df = apply(&d, &f).stage(|| "D".into())?;
        k0_l = k0_l.max((&kl - &df).max_abs() / df.max_abs());
    }
    let trig = trig_identity_defect();

    let k5 = longwave_truncation(Truncated::K0eps, 5).stage(|| "K0 truncation".into())?;
    let norms = cfg
        .eps_ladder
        .par_iter()
        .map(|&e| {
            let ga =
                Grid::new(cfg.n, cfg.length / e, -0.5 * cfg.length / e).stage(|| format!("workhorse grid eps={e}"))?;
            let f = Field::from_fn(ga, |a| (-(e * a).powi(2)).exp());
            let diff = apply(&k0, &f).stage(|| "K0".into())? - apply(&k5, &f).stage(|| "K0 truncation".into())?;
            Ok(diff.sobolev(cfg.s))
        })
        .collect::<Result<Vec<f64>, RunError>>()?;
    let fit = fit_slope(&cfg.eps_ladder, &norms).stage(|| "workhorse slope fit".into())?;

    let checks = vec![
        Check::at_most("trig_identity", trig, cfg.threshold("trig_identity_max")),
        Check::at_most("l_after_linv", l_linv, cfg.threshold("composition_max")),
        Check::at_most("k0_after_l_minus_d", k0_l, cfg.threshold("composition_max")),
        Check::at_least("workhorse_slope", fit.slope, cfg.threshold("workhorse_slope_min")),
    ];
    let table = csv_table(
        &["check", "value", "relation", "limit", "pass"],
        checks.iter().map(|c| vec![c.name.clone(), num(c.value), c.relation.clone(), num(c.limit), c.pass.to_string()]),
    );
    let work = csv_table(&["eps", "norm"], cfg.eps_ladder.iter().zip(&norms).map(|(e, v)| vec![num(*e), num(*v)]));
    let pts: Vec<(f64, f64)> = cfg.eps_ladder.iter().copied().zip(norms.iter().copied()).collect();
    let plot = Plot::new("K0 minus its order-5 expansion", "eps", "H^s norm")
        .log_log()
        .with(Series::new(format!("slope {:.2}", fit.slope), pts));
    Ok(Outcome {
        checks,
        artifacts: vec![
            Artifact::new("identities.csv", table),
            Artifact::new("workhorse.csv", work),
            Artifact::new("workhorse.svg", plot.to_svg()),
        ],
        diagnostics: json!({ "workhorse_fit": fit, "random_fields": 8, "seed": cfg.seed }),
    })
}
