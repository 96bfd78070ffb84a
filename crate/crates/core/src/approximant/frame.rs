use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modulation::{Components, Jet, LabSystem, ModelLevel, ModulationState};
use crate::spectral::{Builtin, Field, Grid, Multiplier};

/// Which approximant is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fidelity {
    /// The displayed first corrections: `psi_d`, `psi_y`, `psi_u`.
    Simple,
    /// `Psi_d` with `W3`, `Psi_z = L^{-1} Psi_d`, `Psi_y` with the Delta corrections and `Psi_u` from fluxes.
    Extended,
}

/// Analytic time derivatives of the four frame fields.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameDerivatives {
    pub order: usize,
    pub dt_psi_d: Field,
    pub dt_psi_z: Field,
    pub dt_psi_y: Field,
    pub dt_psi_u: Field,
    /// Second derivatives, present when `order == 2`.
    pub dtt_psi_d: Option<Field>,
    pub dtt_psi_z: Option<Field>,
    pub dtt_psi_y: Option<Field>,
    pub dtt_psi_u: Option<Field>,
}

/// Approximant on the physical alpha-grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantFrame {
    pub t: f64,
    pub eps: f64,
    pub fidelity: Fidelity,
    pub level: ModelLevel,
    pub psi_d: Field,
    pub psi_z: Field,
    pub psi_y: Field,
    pub psi_u: Field,
    pub derivatives: Option<FrameDerivatives>,
}

impl ApproximantFrame {
    pub fn grid(&self) -> &Grid {
        self.psi_d.grid()
    }

    /// `(psi_z, psi_y, psi_u)`, the variables of the water-wave system.
    pub fn triple(&self) -> [&Field; 3] {
        [&self.psi_z, &self.psi_y, &self.psi_u]
    }
}

/// `(Delta_1, Delta_2)` from `Z1`, `Z2` and `d_tau Z1`, derivatives in beta.
pub fn deltas(z1: &Field, z2: &Field, dtau_z1: &Field) -> (Field, Field) {
    let j = |f: &Field| Jet::constant(f.clone(), 0);
    let (d1, d2) = deltas_jet(&j(z1), &j(z2), &j(dtau_z1));
    (d1.value().clone(), d2.value().clone())
}

fn deltas_jet(z1: &Jet, z2: &Jet, dtau_z1: &Jet) -> (Jet, Jet) {
    let d1 = z1.square();
    let z1x = z1.dx(1);
    let d2 = z1x.square() + 2.0 * &(z1 * z2) + (1.0 / 3.0) * &(&d1 * z1) + (4.0 / 3.0) * &(z1 * &z1.dx(2))
        - (2.0 / 3.0) * &dtau_z1.square();
    (d1, d2)
}

/// Frame quantities as jets in `tau` on the beta-grid.
pub(crate) struct FrameJets {
    pub psi_d: Jet,
    pub psi_z: Jet,
    pub psi_y: Jet,
    pub psi_u: Jet,
}

pub(crate) fn frame_jets(state: &ModulationState, fidelity: Fidelity, order: usize) -> Result<FrameJets> {
    let eps = state.eps();
    let e2 = eps * eps;
    let e4 = e2 * e2;
    let e6 = e4 * e2;
    let system = LabSystem::new(*state.grid(), eps, state.level())?;
    let s = system.jets(state.fields(), order);
    let Components { u, v, f, g, p_minus, p_plus, a_minus, a_plus } = &s;
    let linv = Multiplier::builtin(Builtin::Linv).scaled(eps);
    match fidelity {
        Fidelity::Simple => {
            let sum_kdv = u + v;
            let sum_corr = &(f + g) + &(p_minus + p_plus);
            let psi_d = -(e2 * &sum_kdv) - e4 * &sum_corr;
            let psi_y = e2 * &sum_kdv + e4 * &(&sum_corr + &((1.0 / 3.0) * &sum_kdv.dx(2)) + sum_kdv.square());
            let dif_corr = &(f - g) + &(p_minus - p_plus);
            let psi_u =
                e2 * &(u - v) + e4 * &(&dif_corr + &((1.0 / 6.0) * &(u - v).dx(2)) + 0.75 * &(u.square() - v.square()));
            let psi_z = psi_d.apply(&linv)?;
            Ok(FrameJets { psi_d, psi_z, psi_y, psi_u })
        }
        Fidelity::Extended => {
            let w1 = -(u + v);
            let w2 = -(&(f + g) + &(p_minus + p_plus));
            let w3 = a_minus + a_plus;
            let psi_d = &(e2 * &w1 + e4 * &w2) + &(e6 * &w3);
            let psi_z = psi_d.apply(&linv)?;
            let z1 = w1.apply(&linv)?;
            let z2 = w2.apply(&linv)?;
            let (d1, d2) = deltas_jet(&z1, &z2, &z1.dt());
            let psi_y = &(&psi_z + &(e4 * &d1)) + &(e6 * &d2);
            let m = system.fluxes(&s);
            let psi_u = e2 * &(-(&m.u + &m.v)) + e4 * &(-(&(&m.f + &m.g) + &(&m.p_minus + &m.p_plus))) + e6 * &m.w3;
            Ok(FrameJets { psi_d, psi_z, psi_y, psi_u })
        }
    }
}

fn check_inputs(state: &ModulationState, t: f64, alpha_grid: &Grid) -> Result<()> {
    let tau = state.tau();
    if (tau - state.eps() * t).abs() > 1e-9 * tau.abs().max(1.0) {
        return Err(Error::TimeMismatch(format!("state at tau={tau} but eps*t={}", state.eps() * t)));
    }
    let expected = state.grid().stretched(state.eps())?;
    expected.check_same(alpha_grid)
}

fn to_alpha(f: &Field, grid: &Grid) -> Field {
    f.relabel(*grid).expect("point counts agree")
}

fn derivatives_from(j: &FrameJets, eps: f64, order: usize, grid: &Grid) -> FrameDerivatives {
    let d = |x: &Jet, m: usize| to_alpha(&x.derivative(m).scale(eps.powi(m as i32)), grid);
    let second = |x: &Jet| if order >= 2 { Some(d(x, 2)) } else { None };
    FrameDerivatives {
        order,
        dt_psi_d: d(&j.psi_d, 1),
        dt_psi_z: d(&j.psi_z, 1),
        dt_psi_y: d(&j.psi_y, 1),
        dt_psi_u: d(&j.psi_u, 1),
        dtt_psi_d: second(&j.psi_d),
        dtt_psi_z: second(&j.psi_z),
        dtt_psi_y: second(&j.psi_y),
        dtt_psi_u: second(&j.psi_u),
    }
}

/// Assembles the approximant at physical time `t` from a state at `tau = eps t`.
pub fn assemble_frame(
    state: &ModulationState,
    t: f64,
    alpha_grid: &Grid,
    fidelity: Fidelity,
) -> Result<ApproximantFrame> {
    check_inputs(state, t, alpha_grid)?;
    // Delta_2 needs d_tau Z1, so the value already uses a first-order jet
    let j = frame_jets(state, fidelity, 1)?;
    Ok(ApproximantFrame {
        t,
        eps: state.eps(),
        fidelity,
        level: state.level(),
        psi_d: to_alpha(j.psi_d.value(), alpha_grid),
        psi_z: to_alpha(j.psi_z.value(), alpha_grid),
        psi_y: to_alpha(j.psi_y.value(), alpha_grid),
        psi_u: to_alpha(j.psi_u.value(), alpha_grid),
        derivatives: None,
    })
}

/// Time derivatives of the frame by the chain rule through the modulation equations (no differencing).
pub fn time_derivative_closure(
    state: &ModulationState,
    t: f64,
    alpha_grid: &Grid,
    fidelity: Fidelity,
    order: usize,
) -> Result<FrameDerivatives> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidArgument(format!("closure order must be 1 or 2 (got {order})")));
    }
    check_inputs(state, t, alpha_grid)?;
    let j = frame_jets(state, fidelity, order + 1)?;
    Ok(derivatives_from(&j, state.eps(), order, alpha_grid))
}

/// Frame together with first and second time derivatives, sharing one jet evaluation.
pub fn assemble_frame_with_derivatives(
    state: &ModulationState,
    t: f64,
    alpha_grid: &Grid,
    fidelity: Fidelity,
) -> Result<ApproximantFrame> {
    check_inputs(state, t, alpha_grid)?;
    let j = frame_jets(state, fidelity, 3)?;
    let derivatives = derivatives_from(&j, state.eps(), 2, alpha_grid);
    Ok(ApproximantFrame {
        t,
        eps: state.eps(),
        fidelity,
        level: state.level(),
        psi_d: to_alpha(j.psi_d.value(), alpha_grid),
        psi_z: to_alpha(j.psi_z.value(), alpha_grid),
        psi_y: to_alpha(j.psi_y.value(), alpha_grid),
        psi_u: to_alpha(j.psi_u.value(), alpha_grid),
        derivatives: Some(derivatives),
    })
}

/// Largest zero-mode of `d_t Psi_d` relative to its size, and the gap between the
/// closed-form `Psi_u` and the spectral `d_alpha^{-1} d_t Psi_d`.
pub fn psi_u_crosscheck(frame: &ApproximantFrame) -> Result<(f64, f64)> {
    let d = frame.derivatives.as_ref().ok_or_else(|| Error::InvalidArgument("frame has no derivatives".into()))?;
    let c0 = d.dt_psi_d.coefficients()[0].norm();
    let scale = d.dt_psi_d.max_abs().max(f64::MIN_POSITIVE);
    let spectral = d.dt_psi_d.antiderivative_projected();
    // closed forms fix the additive constant, the spectral inverse does not
    let mean = frame.psi_u.mean();
    let psi_u = frame.psi_u.map(|x| x - mean);
    let gap = (&spectral - &psi_u).sobolev(0.0) / psi_u.sobolev(0.0).max(f64::MIN_POSITIVE);
    Ok((c0 / scale, gap))
}
