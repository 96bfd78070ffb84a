//! Reference stepper for the truncated water-wave system with `K = K0 + K1`.

mod error_curve;

pub use error_curve::{compare_error, track_errors, ErrorCurve, ErrorStudy, ErrorStudyOptions};

use serde::{Deserialize, Serialize};

use crate::approximant::ApproximantFrame;
use crate::error::{Error, Result};
use crate::modulation::Trajectory;
use crate::residual::k1_apply;
use crate::spectral::{Builtin, Field, Multiplier};

/// `(z, y, u)` on the alpha-grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WwState {
    pub t: f64,
    pub z: Field,
    pub y: Field,
    pub u: Field,
}

impl WwState {
    pub fn zeros(grid: crate::spectral::Grid) -> Self {
        Self { t: 0.0, z: Field::zeros(grid), y: Field::zeros(grid), u: Field::zeros(grid) }
    }

    /// Starts from an approximant frame (optionally two-thirds filtered).
    pub fn from_frame(frame: &ApproximantFrame, filter: bool) -> Self {
        let f = |x: &Field| if filter { x.filter_two_thirds() } else { x.clone() };
        Self { t: frame.t, z: f(&frame.psi_z), y: f(&frame.psi_y), u: f(&frame.psi_u) }
    }

    /// Quadratic energy of the linearized system, `(1/2) int y^2 + (1/2) <u, -L^{-1} u>`.
    pub fn linear_energy(&self) -> Result<f64> {
        let linv = Multiplier::builtin(Builtin::Linv);
        let lu = linv.apply(&self.u)?;
        Ok(0.5 * self.y.mul_pointwise(&self.y).integral() - 0.5 * self.u.mul_pointwise(&lu).integral())
    }

    /// `min (1 + L z)`, which must stay above 1/2.
    pub fn min_denominator(&self) -> Result<f64> {
        Ok(Multiplier::builtin(Builtin::L).apply(&self.z)?.min() + 1.0)
    }

    pub fn boundary_magnitude(&self) -> f64 {
        self.z.boundary_magnitude().max(self.y.boundary_magnitude()).max(self.u.boundary_magnitude())
    }

    fn axpy(&self, h: f64, r: &WwRhs) -> WwState {
        let mut s = self.clone();
        s.t += h;
        s.z.axpy(h, &r.dz);
        s.y.axpy(h, &r.dy);
        s.u.axpy(h, &r.du);
        s
    }
}

/// Settings of the implicit `u_t` solve and the output filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WwOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Apply the two-thirds filter to the right-hand side.
    pub filter: bool,
}

impl Default for WwOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 50, filter: true }
    }
}

/// Time derivatives with solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct WwRhs {
    pub dz: Field,
    pub dy: Field,
    pub du: Field,
    pub iterations: usize,
    /// `||A du + y_alpha (1 + b)||_0` after the last iterate.
    pub defect: f64,
}

fn k_apply(k0: &Multiplier, z: &Field, y: &Field, w: &Field) -> Result<Field> {
    Ok(k0.apply(w)? + k1_apply(z, y, w)?)
}

/// Right-hand side of the truncated system.
///
/// `z_t = K0 u`, `y_t = K(z,y) u` and `u_t` solving
/// `(1 + L z) u_t + y_alpha K(z,y) u_t = -y_alpha (1 + b)` with `b = K1(z_t, y_t) u`,
/// by fixed-point iteration started from the plain division.
pub fn ww_rhs(state: &WwState, opts: &WwOptions) -> Result<WwRhs> {
    let k0 = Multiplier::builtin(Builtin::K0);
    let l = Multiplier::builtin(Builtin::L);
    let (z, y, u) = (&state.z, &state.y, &state.u);
    let dz = k0.apply(u)?;
    let dy = k_apply(&k0, z, y, u)?;
    let b = k1_apply(&dz, &dy, u)?;
    let ay = y.d();
    let den = l.apply(z)?.map(|x| 1.0 + x);
    let min_den = den.min();
    if !(min_den >= 0.5) {
        return Err(Error::Denominator { min: min_den });
    }
    let forcing = -ay.mul_pointwise(&b.map(|x| 1.0 + x));
    let mut du = forcing.div_pointwise(&den);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let kdu = k_apply(&k0, z, y, &du)?;
        let next = (&forcing - &ay.mul_pointwise(&kdu)).div_pointwise(&den);
        let change = (&next - &du).max_abs();
        let size = next.max_abs();
        du = next;
        if change <= opts.tol * size || size == 0.0 {
            converged = true;
            break;
        }
    }
    let kdu = k_apply(&k0, z, y, &du)?;
    let defect = (&(&den.mul_pointwise(&du) + &ay.mul_pointwise(&kdu)) - &forcing).l2();
    if !converged {
        return Err(Error::NoConvergence { iterations, defect });
    }
    let f = |x: Field| if opts.filter { x.filter_two_thirds() } else { x };
    Ok(WwRhs { dz: f(dz), dy: f(dy), du: f(du), iterations, defect })
}

/// One classical RK4 step; returns the new state and the largest iteration count used.
pub fn ww_step(state: &WwState, dt: f64, opts: &WwOptions) -> Result<(WwState, usize)> {
    let k1 = ww_rhs(state, opts)?;
    let k2 = ww_rhs(&state.axpy(0.5 * dt, &k1), opts)?;
    let k3 = ww_rhs(&state.axpy(0.5 * dt, &k2), opts)?;
    let k4 = ww_rhs(&state.axpy(dt, &k3), opts)?;
    let mut next = state.clone();
    next.t += dt;
    for (x, parts) in [
        (&mut next.z, [&k1.dz, &k2.dz, &k3.dz, &k4.dz]),
        (&mut next.y, [&k1.dy, &k2.dy, &k3.dy, &k4.dy]),
        (&mut next.u, [&k1.du, &k2.du, &k3.du, &k4.du]),
    ] {
        x.axpy(dt / 6.0, parts[0]);
        x.axpy(dt / 3.0, parts[1]);
        x.axpy(dt / 3.0, parts[2]);
        x.axpy(dt / 6.0, parts[3]);
    }
    let iters = k1.iterations.max(k2.iterations).max(k3.iterations).max(k4.iterations);
    Ok((next, iters))
}

/// Largest `dt * omega(k)` on the grid, `omega = sqrt(k tanh k)`.
pub fn dispersion_cfl(grid: &crate::spectral::Grid, dt: f64) -> f64 {
    let k = grid.k_max();
    dt * (k * k.tanh()).sqrt()
}

/// Trajectory plus run diagnostics.
#[derive(Debug, Clone)]
pub struct WwRun {
    pub trajectory: Trajectory<WwState>,
    pub max_iterations: usize,
    pub energy_drift: f64,
    pub max_boundary: f64,
}

/// RK4 run to `t_end`, storing every `stride`-th step.
pub fn ww_evolve(init: &WwState, t_end: f64, dt: f64, stride: usize, opts: &WwOptions) -> Result<WwRun> {
    let cfl = dispersion_cfl(init.z.grid(), dt);
    if cfl > 1.5 {
        return Err(Error::StepSize(format!("dispersion CFL {cfl:.3} exceeds 1.5")));
    }
    let steps = ((t_end - init.t) / dt - 1e-9).ceil().max(0.0) as usize;
    let h = if steps > 0 { (t_end - init.t) / steps as f64 } else { dt };
    let stride = stride.max(1);
    let e0 = init.linear_energy()?;
    let mut traj = Trajectory::new();
    traj.push(init.t, init.clone())?;
    let mut state = init.clone();
    let mut max_iterations = 0;
    let mut energy_drift = 0.0_f64;
    let mut max_boundary = init.boundary_magnitude();
    let reference = init.z.l2() + init.y.l2() + init.u.l2();
    for i in 1..=steps {
        let (next, iters) = ww_step(&state, h, opts)?;
        state = next;
        max_iterations = max_iterations.max(iters);
        let size = state.z.l2() + state.y.l2() + state.u.l2();
        if !size.is_finite() || (reference > 0.0 && size > 100.0 * reference) {
            return Err(Error::BlowUp { t: state.t, detail: format!("state norm {size:e}") });
        }
        if i % stride == 0 || i == steps {
            let e = state.linear_energy()?;
            energy_drift = energy_drift.max((e - e0).abs() / e0.abs().max(f64::MIN_POSITIVE));
            max_boundary = max_boundary.max(state.boundary_magnitude());
            traj.push(state.t, state.clone())?;
        }
    }
    Ok(WwRun { trajectory: traj, max_iterations, energy_drift, max_boundary })
}
