use longwave::approximant::*;
use longwave::modulation::*;
use longwave::residual::fit_slope;
use longwave::spectral::*;
use longwave::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn beta_grid() -> Grid {
    Grid::centered(512, 60.0).unwrap()
}

fn max_diff(a: &Field, b: &Field) -> f64 {
    (a - b).max_abs()
}

fn rel(a: &Field, b: &Field) -> f64 {
    max_diff(a, b) / b.max_abs().max(1e-300)
}

fn headon(eps: f64, c: f64) -> ModulationState {
    let g = beta_grid();
    let u = soliton(g, 1.0, -c, Chirality::Right).unwrap();
    let v = soliton(g, 1.0, c, Chirality::Left).unwrap();
    ModulationState::from_profiles(eps, ModelLevel::Full, u, v, None, None).unwrap()
}

fn advanced(state: ModulationState, tau: f64, dtau: f64) -> ModulationState {
    let mut h = Hierarchy::new(state, dtau).unwrap();
    h.advance_to(tau).unwrap();
    h.into_state()
}

/// Seeded state with smooth random bumps in every component.
fn random_state(seed: u64, eps: f64) -> ModulationState {
    let g = beta_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bump = |scale: f64| {
        let a = scale * rng.random_range(0.2..1.0);
        let c = rng.random_range(-8.0..8.0);
        let w = rng.random_range(1.0..2.5);
        Field::from_fn(g, move |x| a * (-((x - c) / w).powi(2)).exp())
    };
    let fields = Components::from_array([
        bump(1.0),
        bump(1.0),
        bump(0.5),
        bump(0.5),
        bump(0.3),
        bump(0.3),
        bump(0.2),
        bump(0.2),
    ]);
    ModulationState::new(eps, 0.0, ModelLevel::Full, fields).unwrap()
}

#[test]
fn zero_state_gives_zero_frame() {
    let g = beta_grid();
    let eps = 0.1;
    let s = ModulationState::zero(g, eps, ModelLevel::Full).unwrap();
    let a = g.stretched(eps).unwrap();
    for fid in [Fidelity::Simple, Fidelity::Extended] {
        let fr = assemble_frame_with_derivatives(&s, 0.0, &a, fid).unwrap();
        for f in [&fr.psi_d, &fr.psi_z, &fr.psi_y, &fr.psi_u] {
            assert_eq!(f.max_abs(), 0.0);
        }
        let d = fr.derivatives.unwrap();
        for f in [&d.dt_psi_d, &d.dt_psi_y, &d.dt_psi_u, d.dtt_psi_y.as_ref().unwrap()] {
            assert_eq!(f.max_abs(), 0.0);
        }
    }
}

#[test]
fn simple_frame_u_only_pointwise() {
    let g = beta_grid();
    let eps = 0.15;
    let u = soliton(g, 1.0, 2.0, Chirality::Right).unwrap();
    let s = ModulationState::from_profiles(eps, ModelLevel::Full, u.clone(), Field::zeros(g), None, None).unwrap();
    let a = g.stretched(eps).unwrap();
    let fr = assemble_frame(&s, 0.0, &a, Fidelity::Simple).unwrap();
    let (e2, e4) = (eps * eps, eps.powi(4));
    // closed forms of the sech^2 profile and its second derivative
    let kappa = 3f64.sqrt() / 2.0;
    let uu = |b: f64| 1.0 / (kappa * (b - 2.0)).cosh().powi(2);
    let u2 = |b: f64| {
        let s = 1.0 / (kappa * (b - 2.0)).cosh();
        let t = (kappa * (b - 2.0)).tanh();
        2.0 * kappa * kappa * s * s * (2.0 * t * t - s * s)
    };
    for (i, al) in a.points().iter().enumerate() {
        let b = eps * al;
        let d = -e2 * uu(b);
        let y = e2 * uu(b) + e4 * (u2(b) / 3.0 + uu(b).powi(2));
        let w = e2 * uu(b) + e4 * (u2(b) / 6.0 + 0.75 * uu(b).powi(2));
        assert!((fr.psi_d.values()[i] - d).abs() <= 1e-14);
        assert!((fr.psi_y.values()[i] - y).abs() <= 1e-12 * e2);
        assert!((fr.psi_u.values()[i] - w).abs() <= 1e-12 * e2);
    }
}

#[test]
fn extended_close_to_simple() {
    let eps_values = [0.05, 0.07, 0.1, 0.14, 0.2];
    let mut diffs = [vec![], vec![], vec![]];
    for &eps in &eps_values {
        let s = advanced(headon(eps, 1.0), 2.0, 0.02);
        let a = s.grid().stretched(eps).unwrap();
        let t = s.tau() / eps;
        let ext = assemble_frame(&s, t, &a, Fidelity::Extended).unwrap();
        let sim = assemble_frame(&s, t, &a, Fidelity::Simple).unwrap();
        diffs[0].push((&ext.psi_d - &sim.psi_d).sobolev(4.0));
        diffs[1].push((&ext.psi_y - &sim.psi_y).sobolev(4.0));
        diffs[2].push((&ext.psi_u - &sim.psi_u).sobolev(4.0));
    }
    for d in &diffs {
        let r = fit_slope(&eps_values, d).unwrap();
        assert!(r.slope >= 5.4, "{d:?} slope {}", r.slope);
    }
}

#[test]
fn psi_z_inverts_l() {
    let eps = 0.2;
    let s = advanced(random_state(3, eps), 0.4, 0.02);
    let a = s.grid().stretched(eps).unwrap();
    let fr = assemble_frame(&s, s.tau() / eps, &a, Fidelity::Extended).unwrap();
    let back = apply(&builtin_symbol("L").unwrap(), &fr.psi_z).unwrap();
    assert!(rel(&back, &fr.psi_d) <= 1e-12);
    assert!(fr.psi_d.boundary_magnitude() < 1e-8 && fr.psi_u.boundary_magnitude() < 1e-8);
}

#[test]
fn deltas_examples() {
    let g = Grid::new(64, 2.0 * std::f64::consts::PI, 0.0).unwrap();
    let z = Field::zeros(g);
    let (d1, d2) = deltas(&z, &Field::from_fn(g, f64::sin), &z);
    assert_eq!(d1.max_abs(), 0.0);
    assert_eq!(d2.max_abs(), 0.0);
    let (d1, d2) = deltas(&Field::from_fn(g, f64::cos), &z, &Field::from_fn(g, f64::sin));
    for (i, b) in g.points().iter().enumerate() {
        let (c, s) = (b.cos(), b.sin());
        assert!((d1.values()[i] - c * c).abs() < 1e-14);
        let want = s * s + c.powi(3) / 3.0 - 4.0 / 3.0 * c * c - 2.0 / 3.0 * s * s;
        assert!((d2.values()[i] - want).abs() < 1e-12);
    }
}

#[test]
fn deltas_dual_path_soliton() {
    let g = Grid::centered(1024, 60.0).unwrap();
    let z1 = soliton(g, 1.0, 0.0, Chirality::Right).unwrap();
    let dz = z1.d();
    let (_, d2) = deltas(&z1, &Field::zeros(g), &dz);
    let dd = |f: &Field, m| apply(&Multiplier::derivative(m), f).unwrap();
    let z1x = dd(&z1, 1);
    let oracle = z1x.mul_pointwise(&z1x)
        + (1.0 / 3.0) * &z1.mul_pointwise(&z1).mul_pointwise(&z1)
        + (4.0 / 3.0) * &z1.mul_pointwise(&dd(&z1, 2))
        - (2.0 / 3.0) * &dz.mul_pointwise(&dz);
    assert!(max_diff(&d2, &oracle) <= 1e-10);
}

/// Frames at `t0`, `t0 + h`, `t0 + 2h` from one trajectory.
fn frames_around(state: &ModulationState, h: f64, fid: Fidelity) -> Vec<ApproximantFrame> {
    let eps = state.eps();
    let a = state.grid().stretched(eps).unwrap();
    let t0 = state.tau() / eps;
    let mut hier = Hierarchy::new(state.clone(), eps * h).unwrap();
    (0..3)
        .map(|i| {
            let t = t0 + i as f64 * h;
            hier.advance_to(eps * t).unwrap();
            assemble_frame(hier.state(), t, &a, fid).unwrap()
        })
        .collect()
}

#[test]
fn closure_matches_differences_u_only() {
    let g = beta_grid();
    let eps = 0.2;
    let u = soliton(g, 1.0, 0.0, Chirality::Right).unwrap();
    let s = ModulationState::from_profiles(eps, ModelLevel::Full, u, Field::zeros(g), None, None).unwrap();
    check_closure(&s);
}

#[test]
fn closure_matches_differences_random_states() {
    for seed in [11, 12] {
        check_closure(&random_state(seed, 0.25));
    }
}

fn check_closure(s: &ModulationState) {
    let eps = s.eps();
    let a = s.grid().stretched(eps).unwrap();
    let h = 1e-4;
    for fid in [Fidelity::Simple, Fidelity::Extended] {
        let fr = frames_around(s, h, fid);
        // evaluate at the middle frame
        let mid = advanced(s.clone(), eps * (s.tau() / eps + h), eps * h);
        let d1 = time_derivative_closure(&mid, s.tau() / eps + h, &a, fid, 1).unwrap();
        assert!(d1.dtt_psi_y.is_none());
        let d = time_derivative_closure(&mid, s.tau() / eps + h, &a, fid, 2).unwrap();
        assert_eq!(d1.dt_psi_y, d.dt_psi_y);
        let c1 = |x: fn(&ApproximantFrame) -> &Field| (1.0 / (2.0 * h)) * &(x(&fr[2]) - x(&fr[0]));
        let c2 =
            |x: fn(&ApproximantFrame) -> &Field| (1.0 / (h * h)) * &(&(x(&fr[2]) - &(2.0 * x(&fr[1]))) + x(&fr[0]));
        assert!(max_diff(&c1(|f| &f.psi_d), &d.dt_psi_d) <= 1e-7, "{:?}", fid);
        assert!(max_diff(&c1(|f| &f.psi_z), &d.dt_psi_z) <= 1e-7);
        assert!(max_diff(&c1(|f| &f.psi_y), &d.dt_psi_y) <= 1e-7);
        assert!(max_diff(&c1(|f| &f.psi_u), &d.dt_psi_u) <= 1e-7);
        let e = max_diff(&c2(|f| &f.psi_y), d.dtt_psi_y.as_ref().unwrap());
        assert!(e <= 1e-5, "{fid:?} {e}");
        assert!(max_diff(&c2(|f| &f.psi_d), d.dtt_psi_d.as_ref().unwrap()) <= 1e-5);
    }
    assert!(matches!(
        time_derivative_closure(s, s.tau() / eps, &a, Fidelity::Extended, 3),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn psi_u_closed_form_matches_spectral_inverse() {
    let eps = 0.2;
    let s = advanced(headon(eps, 2.0), 2.0, 0.02);
    let a = s.grid().stretched(eps).unwrap();
    let fr = assemble_frame_with_derivatives(&s, s.tau() / eps, &a, Fidelity::Extended).unwrap();
    let (zero_mode, gap) = psi_u_crosscheck(&fr).unwrap();
    assert!(zero_mode < 1e-12, "{zero_mode}");
    assert!(gap < 1e-10, "{gap}");
}

#[test]
fn frame_input_checks() {
    let eps = 0.1;
    let s = headon(eps, 5.0);
    let a = s.grid().stretched(eps).unwrap();
    assert!(matches!(assemble_frame(&s, 1.0, &a, Fidelity::Simple), Err(Error::TimeMismatch(_))));
    let wrong = s.grid().stretched(0.2).unwrap();
    assert!(matches!(assemble_frame(&s, 0.0, &wrong, Fidelity::Simple), Err(Error::GridMismatch(_))));
}

fn gaussian(g: Grid, c: f64, w: f64) -> Field {
    Field::from_fn(g, move |x| (-((x - c) / w).powi(2)).exp())
}

#[test]
fn split_symmetric_cases() {
    let g = beta_grid();
    let th = gaussian(g, 0.0, 2.0).d();
    let m = split_initial_data(&th, &th, 0.1).unwrap();
    assert!(max_diff(&m.u0, &th) == 0.0 && m.v0.max_abs() == 0.0);
    let m = split_initial_data(&th, &(-1.0 * &th), 0.1).unwrap();
    assert!(m.u0.max_abs() == 0.0 && max_diff(&m.v0, &th) == 0.0);
}

#[test]
fn split_dual_path() {
    let g = beta_grid();
    let ty = gaussian(g, 1.0, 2.0).d();
    let tu = Field::zeros(g);
    let m = split_initial_data(&ty, &tu, 0.1).unwrap();
    assert!(max_diff(&(&m.u0 + &m.v0), &ty) <= 1e-15);
    assert!(max_diff(&(&m.u0 - &m.v0), &tu) <= 1e-15);
    // independent recomputation: X1 = -int_0^beta Theta_y = -(G(beta) - G(0)) for Theta_y = G'
    let x1 = Field::from_fn(g, |x| -((-((x - 1.0) / 2.0).powi(2)).exp() - (-0.25f64).exp()));
    assert!(max_diff(&m.x1, &x1) <= 1e-12);
    let u0 = 0.5 * &ty;
    let v0 = 0.5 * &ty;
    let d2 = |f: &Field| apply(&Multiplier::derivative(2), f).unwrap();
    let h_y = x1.mul_pointwise(&ty.d()) - (1.0 / 3.0) * &d2(&u0) - (1.0 / 3.0) * &d2(&v0) - ty.mul_pointwise(&ty);
    let h_u = -(1.0 / 6.0) * &d2(&u0) + (1.0 / 6.0) * &d2(&v0) - 0.75 * &u0.mul_pointwise(&u0)
        + 0.75 * &v0.mul_pointwise(&v0);
    assert!(max_diff(&m.f0, &(0.5 * &(&h_y + &h_u))) <= 1e-12);
    assert!(max_diff(&m.g0, &(0.5 * &(&h_y - &h_u))) <= 1e-12);
    // X2' = -(F0 + G0)
    let slope = -(&m.f0 + &m.g0);
    let inner: Vec<usize> = (100..412).collect();
    let dx2 = {
        let lin = Field::from_fn(g, |x| -m.x2_drift * x);
        (&m.x2 - &lin).d() + Field::constant(g, -m.x2_drift)
    };
    for i in inner {
        assert!((dx2.values()[i] - slope.values()[i]).abs() <= 1e-10);
    }
}

#[test]
fn split_requires_mean_zero_theta_y() {
    let g = beta_grid();
    let bad = gaussian(g, 0.0, 2.0);
    let e = split_initial_data(&bad, &Field::zeros(g), 0.1).unwrap_err();
    assert!(matches!(e, Error::ZeroModePresent(_)));
    // Theta_u is unrestricted
    assert!(split_initial_data(&bad.d(), &bad, 0.1).is_ok());
}

#[test]
fn initial_conventions_agree_at_t0() {
    let g = beta_grid();
    let m = split_initial_data(&gaussian(g, 0.0, 2.0).d(), &gaussian(g, 1.0, 1.5), 0.1).unwrap();
    let eps = 0.1;
    let a = g.stretched(eps).unwrap();
    let s1 = m.to_state(eps, ModelLevel::Full, InitialConvention::Correctors).unwrap();
    let s2 = m.to_state(eps, ModelLevel::Full, InitialConvention::Transport).unwrap();
    let f1 = assemble_frame(&s1, 0.0, &a, Fidelity::Simple).unwrap();
    let f2 = assemble_frame(&s2, 0.0, &a, Fidelity::Simple).unwrap();
    assert!(max_diff(&f1.psi_y, &f2.psi_y) <= 1e-16);
    assert!(max_diff(&f1.psi_u, &f2.psi_u) <= 1e-16);
    assert!(s2.f().max_abs() == 0.0 && s2.p_minus().max_abs() > 0.0);
}

#[test]
fn initial_data_round_trip_scaling() {
    let g = beta_grid();
    let ty = 2.0 * &gaussian(g, 0.0, 2.0).d();
    let tu = gaussian(g, 0.5, 1.5);
    let m = split_initial_data(&ty, &tu, 0.1).unwrap();
    let eps_values = [0.05, 0.07, 0.1, 0.14, 0.2];
    let mut first = vec![];
    let mut second = vec![];
    for &eps in &eps_values {
        let a = g.stretched(eps).unwrap();
        let s = m.to_state(eps, ModelLevel::Full, InitialConvention::Correctors).unwrap();
        let fr = assemble_frame(&s, 0.0, &a, Fidelity::Simple).unwrap();
        let lead = (eps * eps) * &ty.relabel(a).unwrap();
        first.push((&fr.psi_y - &lead).sobolev(4.0));
        let (ry, ru) = m.reparameterized(eps).unwrap();
        second.push((&fr.psi_y - &ry).sobolev(0.0).max((&fr.psi_u - &ru).sobolev(0.0)));
    }
    let r1 = fit_slope(&eps_values, &first).unwrap();
    assert!(r1.slope >= 3.4, "{}", r1.slope);
    // the reparameterized data agree through the eps^4 level
    let r2 = fit_slope(&eps_values, &second).unwrap();
    assert!(r2.slope >= 5.3, "{}", r2.slope);
}
