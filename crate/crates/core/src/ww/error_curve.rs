use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::{ww_step, WwOptions, WwState};
use crate::approximant::{assemble_frame, ApproximantFrame, Fidelity};
use crate::error::{Error, Result};
use crate::modulation::{Hierarchy, ModelLevel, ModulationState, Trajectory};

/// Errors against an approximant in `H^s x H^s x H^{s-1/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorCurve {
    pub s: f64,
    pub times: Vec<f64>,
    pub err_z: Vec<f64>,
    pub err_y: Vec<f64>,
    pub err_u: Vec<f64>,
    pub combined: Vec<f64>,
    /// Running supremum of `combined`.
    pub sup_err: Vec<f64>,
}

impl ErrorCurve {
    pub fn new(s: f64) -> Self {
        Self { s, times: vec![], err_z: vec![], err_y: vec![], err_u: vec![], combined: vec![], sup_err: vec![] }
    }

    pub fn push(&mut self, state: &WwState, frame: &ApproximantFrame) -> Result<()> {
        if (state.t - frame.t).abs() > 1e-9 * state.t.abs().max(1.0) {
            return Err(Error::TimeMismatch(format!("solver at t={} but frame at t={}", state.t, frame.t)));
        }
        state.z.grid().check_same(frame.grid())?;
        let ez = (&state.z - &frame.psi_z).sobolev(self.s);
        let ey = (&state.y - &frame.psi_y).sobolev(self.s);
        let eu = (&state.u - &frame.psi_u).sobolev(self.s - 0.5);
        let c = ez.max(ey).max(eu);
        let sup = self.sup_err.last().copied().unwrap_or(0.0).max(c);
        self.times.push(state.t);
        self.err_z.push(ez);
        self.err_y.push(ey);
        self.err_u.push(eu);
        self.combined.push(c);
        self.sup_err.push(sup);
        Ok(())
    }

    pub fn sup(&self) -> f64 {
        self.sup_err.last().copied().unwrap_or(0.0)
    }

    /// Columns `t,err_z,err_y,err_u,combined`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,err_z,err_y,err_u,combined\n");
        for i in 0..self.times.len() {
            let _ = writeln!(
                out,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                self.times[i], self.err_z[i], self.err_y[i], self.err_u[i], self.combined[i]
            );
        }
        out
    }
}

/// Errors of a stored trajectory against frames at the same times.
pub fn compare_error(traj: &Trajectory<WwState>, frames: &[ApproximantFrame], s: f64) -> Result<ErrorCurve> {
    if traj.len() != frames.len() {
        return Err(Error::TimeMismatch(format!("{} snapshots but {} frames", traj.len(), frames.len())));
    }
    let mut curve = ErrorCurve::new(s);
    for ((_, state), frame) in traj.iter().zip(frames) {
        curve.push(state, frame)?;
    }
    Ok(curve)
}

/// Settings of [`track_errors`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStudyOptions {
    pub t_end: f64,
    pub dt: f64,
    /// Water-wave steps between error samples.
    pub sample_every: usize,
    /// Step of the modulation hierarchy in `tau`.
    pub dtau: f64,
    pub s: f64,
    pub ww: WwOptions,
}

/// Error curves of the extended and KdV-only approximants along one reference run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorStudy {
    pub eps: f64,
    pub extended: ErrorCurve,
    pub kdv_only: ErrorCurve,
    pub max_iterations: usize,
    pub min_denominator: f64,
    pub max_boundary: f64,
}

/// Runs the reference solver from the extended approximant at `t = 0` and the
/// hierarchy alongside it, sampling both error curves.
pub fn track_errors(state0: &ModulationState, opts: &ErrorStudyOptions) -> Result<ErrorStudy> {
    if state0.tau() != 0.0 || state0.level() != ModelLevel::Full {
        return Err(Error::InvalidArgument("error study starts from a full state at tau = 0".into()));
    }
    let eps = state0.eps();
    let alpha = state0.grid().stretched(eps)?;
    let frame0 = assemble_frame(state0, 0.0, &alpha, Fidelity::Extended)?;
    let mut ww = WwState::from_frame(&frame0, opts.ww.filter);
    let mut hierarchy = Hierarchy::new(state0.clone(), opts.dtau)?;
    let mut extended = ErrorCurve::new(opts.s);
    let mut kdv_only = ErrorCurve::new(opts.s);
    let steps = (opts.t_end / opts.dt - 1e-9).ceil().max(0.0) as usize;
    let h = if steps > 0 { opts.t_end / steps as f64 } else { opts.dt };
    let every = opts.sample_every.max(1);
    let mut max_iterations = 0;
    let mut min_denominator = ww.min_denominator()?;
    let mut max_boundary = ww.boundary_magnitude();

    let sample =
        |ww: &WwState, state: &ModulationState, extended: &mut ErrorCurve, kdv: &mut ErrorCurve| -> Result<()> {
            let fe = assemble_frame(state, ww.t, &alpha, Fidelity::Extended)?;
            let fk = assemble_frame(&state.with_level(ModelLevel::KdvOnly), ww.t, &alpha, Fidelity::Extended)?;
            extended.push(ww, &fe)?;
            kdv.push(ww, &fk)
        };
    sample(&ww, hierarchy.state(), &mut extended, &mut kdv_only)?;
    for i in 1..=steps {
        let (next, iters) = ww_step(&ww, h, &opts.ww)?;
        ww = next;
        ww.t = i as f64 * h;
        max_iterations = max_iterations.max(iters);
        if i % every == 0 || i == steps {
            if !ww.z.is_finite() || !ww.u.is_finite() {
                return Err(Error::BlowUp { t: ww.t, detail: "reference solution not finite".into() });
            }
            min_denominator = min_denominator.min(ww.min_denominator()?);
            max_boundary = max_boundary.max(ww.boundary_magnitude());
            hierarchy.advance_to(eps * ww.t)?;
            sample(&ww, hierarchy.state(), &mut extended, &mut kdv_only)?;
        }
    }
    Ok(ErrorStudy { eps, extended, kdv_only, max_iterations, min_denominator, max_boundary })
}
