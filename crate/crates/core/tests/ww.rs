use longwave::approximant::*;
use longwave::modulation::*;
use longwave::spectral::*;
use longwave::ww::*;
use longwave::Error;
use std::f64::consts::PI;

/// Mode `k = 1` on a periodic box of ten wavelengths.
fn box_grid() -> Grid {
    Grid::new(64, 20.0 * PI, 0.0).unwrap()
}

fn omega(k: f64) -> f64 {
    (k * k.tanh()).sqrt()
}

/// Linear standing wave `y = a cos(k x) cos(w t)`, `u = a k/w sin(k x) sin(w t)`.
fn linear_mode(g: Grid, a: f64, k: f64, t: f64) -> WwState {
    let w = omega(k);
    let y = Field::from_fn(g, |x| a * (k * x).cos() * (w * t).cos());
    let u = Field::from_fn(g, |x| a * k / w * (k * x).sin() * (w * t).sin());
    WwState { t, z: y.clone(), y, u }
}

fn unfiltered() -> WwOptions {
    WwOptions { filter: false, ..Default::default() }
}

fn run_to(init: &WwState, t_end: f64, steps: usize) -> WwState {
    let dt = (t_end - init.t) / steps as f64;
    let mut s = init.clone();
    for _ in 0..steps {
        s = ww_step(&s, dt, &WwOptions::default()).unwrap().0;
    }
    s
}

fn state_diff(a: &WwState, b: &WwState) -> f64 {
    (&a.z - &b.z).max_abs().max((&a.y - &b.y).max_abs()).max((&a.u - &b.u).max_abs())
}

/// A smooth state of moderate size, away from the linear regime.
fn nonlinear_state() -> WwState {
    let g = Grid::centered(64, 40.0).unwrap();
    let z = Field::from_fn(g, |x| 0.05 * (-(x * x) / 4.0).exp());
    let y = Field::from_fn(g, |x| 0.04 * (-(x - 1.0).powi(2) / 6.0).exp());
    let u = Field::from_fn(g, |x| 0.03 * x * (-(x * x) / 5.0).exp());
    WwState { t: 0.0, z, y, u }
}

#[test]
fn zero_state_has_zero_rhs() {
    let r = ww_rhs(&WwState::zeros(box_grid()), &WwOptions::default()).unwrap();
    assert_eq!(r.dz.max_abs() + r.dy.max_abs() + r.du.max_abs(), 0.0);
}

#[test]
fn flat_surface_first_instant() {
    let g = box_grid();
    let mut s = WwState::zeros(g);
    s.u = Field::from_fn(g, |x| 1e-3 * (3.0 * x / 10.0).sin());
    let r = ww_rhs(&s, &WwOptions::default()).unwrap();
    assert_eq!(r.du.max_abs(), 0.0);
    let k0u = apply(&builtin_symbol("K0").unwrap(), &s.u).unwrap();
    assert!((&r.dz - &k0u).max_abs() <= 1e-18);
}

#[test]
fn linear_dispersion_one_period() {
    let g = box_grid();
    for k in [0.3, 1.0, 2.5] {
        let a = 1e-10;
        let period = 2.0 * PI / omega(k);
        let end = run_to(&linear_mode(g, a, k, 0.0), period, 400);
        let want = linear_mode(g, a, k, period);
        assert!(state_diff(&end, &want) <= 1e-8 * a, "k={k}: {}", state_diff(&end, &want) / a);
    }
}

#[test]
fn measured_frequency_matches_dispersion() {
    // zero crossings of the y-mode amplitude give the period directly
    let g = box_grid();
    let (a, k) = (1e-8, 1.0);
    let w = omega(k);
    let dt = 2.0 * PI / w / 400.0;
    let mut s = linear_mode(g, a, k, 0.0);
    let amp = |s: &WwState| s.y.values()[0];
    let mut prev = amp(&s);
    let mut crossings = vec![];
    for i in 1..=1000 {
        let next = ww_step(&s, dt, &unfiltered()).unwrap().0;
        let cur = amp(&next);
        if prev.signum() != cur.signum() {
            // bisect the crossing by restarting RK4 from the last step
            let t0 = (i - 1) as f64 * dt;
            let mut lo = (t0, s.clone());
            let mut hi_t = t0 + dt;
            for _ in 0..40 {
                let mid = 0.5 * (lo.0 + hi_t);
                let m = ww_step(&lo.1, mid - lo.0, &unfiltered()).unwrap().0;
                if amp(&m).signum() == amp(&lo.1).signum() {
                    lo = (mid, m);
                } else {
                    hi_t = mid;
                }
            }
            crossings.push(0.5 * (lo.0 + hi_t));
        }
        prev = cur;
        s = next;
    }
    assert!(crossings.len() >= 4);
    let half = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
    let measured = PI / half;
    assert!((measured - w).abs() <= 1e-6 * w, "{measured} vs {w}");
}

#[test]
fn ten_periods_amplitude_drift() {
    let g = box_grid();
    let (a, k) = (1e-10, 1.0);
    let w = omega(k);
    let period = 2.0 * PI / w;
    let end = run_to(&linear_mode(g, a, k, 0.0), 10.0 * period, 4000);
    // projections onto cos(k x) and sin(k x)
    let proj = |f: &Field, trig: fn(f64) -> f64| {
        f.zip_map(&Field::from_fn(g, move |x| trig(k * x)), |p, q| p * q).integral() * 2.0 / g.length()
    };
    let ya = proj(&end.y, f64::cos);
    let ua = proj(&end.u, f64::sin);
    let amplitude = (ya * ya + (w / k * ua).powi(2)).sqrt();
    assert!((amplitude - a).abs() <= 1e-7 * a, "{}", (amplitude - a).abs() / a);
}

#[test]
fn fixed_point_contracts_quickly() {
    let g = Grid::centered(256, 80.0).unwrap();
    let bump = |x: f64| (-(x * x) / 8.0).exp();
    let mut y = Field::from_fn(g, move |x| x * bump(x));
    let slope = y.d().max_abs();
    y = y.scale(1e-3 / slope);
    assert!((y.d().max_abs() - 1e-3).abs() < 1e-15);
    let z = Field::from_fn(g, move |x| 0.01 * bump(x - 2.0));
    let u = Field::from_fn(g, move |x| 0.2 * bump(x + 1.0));
    let s = WwState { t: 0.0, z, y, u };
    let r = ww_rhs(&s, &WwOptions::default()).unwrap();
    assert!(r.iterations <= 6, "{}", r.iterations);
    assert!(r.defect <= 1e-11, "{}", r.defect);
    assert!(r.du.max_abs() > 0.0);
}

#[test]
fn defect_after_convergence_nonlinear() {
    let r = ww_rhs(&nonlinear_state(), &WwOptions::default()).unwrap();
    assert!(r.defect <= 1e-11, "{}", r.defect);
}

#[test]
fn non_convergence_is_reported() {
    let opts = WwOptions { max_iter: 1, ..Default::default() };
    assert!(matches!(ww_rhs(&nonlinear_state(), &opts), Err(Error::NoConvergence { iterations: 1, .. })));
}

#[test]
fn denominator_exit() {
    let g = Grid::centered(64, 40.0).unwrap();
    let mut s = WwState::zeros(g);
    // L is -1 on constants
    s.z = Field::constant(g, 0.7);
    match ww_rhs(&s, &WwOptions::default()) {
        Err(Error::Denominator { min }) => assert!((min - 0.3).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    assert!((s.min_denominator().unwrap() - 0.3).abs() < 1e-12);
}

#[test]
fn time_reversal_one_step() {
    let s = nonlinear_state();
    let dt = 0.01;
    let fwd = ww_step(&s, dt, &WwOptions::default()).unwrap().0;
    let back = ww_step(&fwd, -dt, &WwOptions::default()).unwrap().0;
    assert!(state_diff(&back, &s) <= 1e-10, "{}", state_diff(&back, &s));
    assert!(back.t.abs() < 1e-15);
}

#[test]
fn rk4_refinement() {
    let s = nonlinear_state();
    let dt = 0.4;
    let reference = run_to(&s, dt, 256);
    let e1 = state_diff(&run_to(&s, dt, 1), &reference);
    let e2 = state_diff(&run_to(&s, dt, 2), &reference);
    let e4 = state_diff(&run_to(&s, dt, 4), &reference);
    assert!(e1 / e2 >= 14.0, "{e1} {e2}");
    assert!(e2 / e4 >= 14.0, "{e2} {e4}");
}

#[test]
fn zero_trajectory() {
    let run = ww_evolve(&WwState::zeros(box_grid()), 5.0, 0.1, 10, &WwOptions::default()).unwrap();
    assert_eq!(run.trajectory.len(), 6);
    for (_, s) in run.trajectory.iter() {
        assert_eq!(s.z.max_abs() + s.y.max_abs() + s.u.max_abs(), 0.0);
    }
    assert_eq!(run.energy_drift, 0.0);
}

#[test]
fn evolve_rejects_large_steps() {
    let g = Grid::centered(256, 20.0).unwrap();
    // k_max ~ 40, so dt = 0.3 puts dt * omega near 1.9
    assert!(dispersion_cfl(&g, 0.3) > 1.5);
    assert!(matches!(ww_evolve(&WwState::zeros(g), 1.0, 0.3, 1, &WwOptions::default()), Err(Error::StepSize(_))));
}

#[test]
fn evolve_monitors_linear_energy() {
    let g = box_grid();
    let init = linear_mode(g, 1e-6, 1.0, 0.0);
    let run = ww_evolve(&init, 20.0, 0.05, 20, &WwOptions::default()).unwrap();
    assert!(run.energy_drift <= 1e-6, "{}", run.energy_drift);
    let (t, _) = run.trajectory.last().unwrap();
    assert!((t - 20.0).abs() < 1e-12);
}

fn headon(eps: f64) -> ModulationState {
    let g = Grid::centered(512, 64.0).unwrap();
    let u = soliton(g, 1.0, -2.0, Chirality::Right).unwrap();
    let v = soliton(g, 1.0, 2.0, Chirality::Left).unwrap();
    ModulationState::from_profiles(eps, ModelLevel::Full, u, v, None, None).unwrap()
}

#[test]
fn compare_error_zero_at_start_and_checks_times() {
    let s = headon(0.3);
    let a = s.grid().stretched(0.3).unwrap();
    let f0 = assemble_frame(&s, 0.0, &a, Fidelity::Extended).unwrap();
    let init = WwState::from_frame(&f0, false);
    let run = ww_evolve(&init, 1.0, 0.05, 10, &WwOptions::default()).unwrap();
    let mut traj = Trajectory::new();
    traj.push(0.0, run.trajectory.states()[0].clone()).unwrap();
    let curve = compare_error(&traj, std::slice::from_ref(&f0), 4.0).unwrap();
    assert_eq!(curve.combined, vec![0.0]);
    assert_eq!(curve.sup(), 0.0);

    let mut f1 = f0.clone();
    f1.t = 0.5;
    assert!(matches!(compare_error(&traj, &[f1], 4.0), Err(Error::TimeMismatch(_))));
    assert!(matches!(compare_error(&run.trajectory, std::slice::from_ref(&f0), 4.0), Err(Error::TimeMismatch(_))));
}

#[test]
fn error_curve_csv_and_running_sup() {
    let s = headon(0.3);
    let opts =
        ErrorStudyOptions { t_end: 4.0, dt: 0.05, sample_every: 10, dtau: 0.02, s: 4.0, ww: WwOptions::default() };
    let study = track_errors(&s, &opts).unwrap();
    let c = &study.extended;
    assert_eq!(c.times.len(), 9);
    assert!(c.combined.iter().all(|&x| x >= 0.0));
    assert!(c.sup_err.windows(2).all(|w| w[1] >= w[0]));
    for i in 0..c.times.len() {
        assert_eq!(c.combined[i], c.err_z[i].max(c.err_y[i]).max(c.err_u[i]));
    }
    let csv = c.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,err_z,err_y,err_u,combined"));
    let row: Vec<f64> = lines.nth(2).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row, vec![c.times[2], c.err_z[2], c.err_y[2], c.err_u[2], c.combined[2]]);
    assert!(study.kdv_only.sup() > c.sup());
    assert!(study.min_denominator >= 0.5);
}

#[test]
fn error_study_needs_fresh_full_state() {
    let s = headon(0.3).with_level(ModelLevel::KdvOnly);
    let opts =
        ErrorStudyOptions { t_end: 1.0, dt: 0.05, sample_every: 1, dtau: 0.02, s: 4.0, ww: WwOptions::default() };
    assert!(matches!(track_errors(&s, &opts), Err(Error::InvalidArgument(_))));
}

#[test]
fn extended_approximant_run_stays_valid_eps_025() {
    let eps = 0.25;
    let s = headon(eps);
    let a = s.grid().stretched(eps).unwrap();
    let f0 = assemble_frame(&s, 0.0, &a, Fidelity::Extended).unwrap();
    let run = ww_evolve(&WwState::from_frame(&f0, true), 0.5 / eps.powi(3), 0.05, 40, &WwOptions::default()).unwrap();
    let (t, last) = run.trajectory.last().unwrap();
    assert!((t - 32.0).abs() < 1e-9);
    assert!(last.min_denominator().unwrap() >= 0.5);
    assert!(run.max_iterations <= 50);
    assert!(run.max_boundary < 1e-8, "{}", run.max_boundary);
}
