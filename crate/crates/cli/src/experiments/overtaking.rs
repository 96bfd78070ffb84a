use longwave::modulation::{kdv_evolve_strided, soliton_speed, Chirality};
use longwave::spectral::Field;
use serde_json::json;

use super::{grid, profile, refined_peak, waves};
use crate::config::{Direction, ExperimentConfig};
use crate::outcome::{csv_table, num, Artifact, Check, Outcome, RunError, StageExt};
use crate::plot::{Plot, Series};

/// `f` restricted to `lo < x <= hi`.
fn window(f: &Field, lo: f64, hi: f64) -> Field {
    let mask = Field::from_fn(*f.grid(), |x| if x > lo && x <= hi { 1.0 } else { 0.0 });
    f.zip_map(&mask, |a, b| a * b)
}

pub(super) fn run(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let g = grid(cfg)?;
    let ws = waves(cfg);
    let (big, small) = (ws[0], ws[1]);
    let w0 = profile(cfg, g, Direction::Right)?;
    let t_end = cfg.t0;
    let traj =
        kdv_evolve_strided(&w0, Chirality::Right, t_end, cfg.dt, cfg.sample_every).stage(|| "kdv evolve".into())?;
    let (t, w) = traj.last().expect("trajectory holds the initial state");
    // free positions had the waves never met
    let free_big = big.center + soliton_speed(big.amplitude, Chirality::Right) * t;
    let free_small = small.center + soliton_speed(small.amplitude, Chirality::Right) * t;
    let split = 0.5 * (free_big + free_small);
    let (ab, xb) = refined_peak(&window(w, split, free_big + (free_big - split)));
    let (as_, xs) = refined_peak(&window(w, free_small - (split - free_small), split));
    let shift_big = xb - free_big;
    let shift_small = xs - free_small;

    let tol = cfg.threshold("amplitude_tol");
    let min_shift = cfg.threshold("phase_shift_min");
    let checks = vec![
        Check::at_most("large_amplitude_error", (ab - big.amplitude).abs(), tol),
        Check::at_most("small_amplitude_error", (as_ - small.amplitude).abs(), tol),
        Check::at_least("large_forward_shift", shift_big, min_shift),
        Check::at_least("small_backward_shift", -shift_small, min_shift),
    ];
    let rows: Vec<[f64; 3]> = traj
        .iter()
        .map(|(t, f)| {
            let (a, x) = refined_peak(f);
            [t, a, x]
        })
        .collect();
    let table = csv_table(
        &["t", "peak_value", "peak_position"],
        rows.iter().map(|r| r.iter().map(|v| num(*v)).collect::<Vec<_>>()),
    );
    let summary = json!({
        "t_end": t,
        "large": { "amplitude": ab, "position": xb, "free_position": free_big, "phase_shift": shift_big },
        "small": { "amplitude": as_, "position": xs, "free_position": free_small, "phase_shift": shift_small },
    });
    let plot = Plot::new("Overtaking collision: tallest peak", "T", "peak position")
        .with(Series::new("peak position", rows.iter().map(|r| (r[0], r[2])).collect()));
    Ok(Outcome {
        checks,
        artifacts: vec![
            Artifact::new("overtaking.csv", table),
            Artifact::json("phase_shifts.json", &summary),
            Artifact::new("overtaking.svg", plot.to_svg()),
        ],
        diagnostics: json!({
            "samples": traj.len(),
            "final_spectral_tail": w.spectral_tail(),
            "final_boundary_magnitude": w.boundary_magnitude(),
        }),
    })
}
