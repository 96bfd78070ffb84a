//! Residuals of the truncated water-wave system and log-log slope fits.

mod scaling;

pub use scaling::{fit_slope, ScalingReport, ScalingTable};

use serde::{Deserialize, Serialize};

use crate::approximant::{assemble_frame_with_derivatives, ApproximantFrame, Fidelity};
use crate::error::{Error, Result};
use crate::modulation::{ModelLevel, ModulationState};
use crate::spectral::{Builtin, Field, Grid, Multiplier};

/// `K1(z, y) u = -(z + y) u_alpha - K0((z + y) K0 u_alpha)`.
pub fn k1_apply(z: &Field, y: &Field, u: &Field) -> Result<Field> {
    z.grid().check_same(y.grid())?;
    z.grid().check_same(u.grid())?;
    let k0 = Multiplier::builtin(Builtin::K0);
    let s = z + y;
    let du = u.d();
    let inner = k0.apply(&du)?;
    Ok(-(&s * &du) - k0.apply(&(&s * &inner))?)
}

/// The three residual fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualFields {
    pub res_z: Field,
    pub res_y: Field,
    pub res_u: Field,
}

/// Residual norms of one frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSample {
    pub eps: f64,
    pub t: f64,
    pub s: f64,
    pub res_z_norm: f64,
    pub res_y_norm: f64,
    pub res_u_norm: f64,
    /// Smallest value of `1 + L Psi_z` on the grid.
    pub min_denominator: f64,
    #[serde(skip)]
    pub fields: Option<ResidualFields>,
}

/// Evaluates `Res_z`, `Res_y`, `Res_u` for a frame carrying its time derivatives.
///
/// Norms use index `s` for `Res_z`, `Res_y` and `s - 1` for `Res_u`.
pub fn residuals(frame: &ApproximantFrame, s: f64, keep_fields: bool) -> Result<ResidualSample> {
    let d = frame
        .derivatives
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("residuals need the frame's time derivatives".into()))?;
    let dtt_y = d
        .dtt_psi_y
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("residuals need the second time derivative of psi_y".into()))?;
    let k0 = Multiplier::builtin(Builtin::K0);
    let l = Multiplier::builtin(Builtin::L);
    let k0u = k0.apply(&frame.psi_u)?;
    let res_z = &d.dt_psi_z - &k0u;
    let k1u = k1_apply(&frame.psi_z, &frame.psi_y, &frame.psi_u)?;
    let res_y = &(&d.dt_psi_y - &k0u) - &k1u;
    let denom = l.apply(&frame.psi_z)?.map(|x| 1.0 + x);
    let min_denominator = denom.min();
    if min_denominator < 0.5 {
        return Err(Error::Denominator { min: min_denominator });
    }
    let num = frame.psi_y.d().mul_pointwise(&dtt_y.map(|x| 1.0 + x));
    let res_u = &d.dt_psi_u + &num.div_pointwise(&denom);
    Ok(ResidualSample {
        eps: frame.eps,
        t: frame.t,
        s,
        res_z_norm: res_z.sobolev(s),
        res_y_norm: res_y.sobolev(s),
        res_u_norm: res_u.sobolev(s - 1.0),
        min_denominator,
        fields: keep_fields.then_some(ResidualFields { res_z, res_y, res_u }),
    })
}

/// Residuals of the extended approximant built from a state at `tau = eps t`.
pub fn state_residuals(state: &ModulationState, s: f64) -> Result<ResidualSample> {
    let t = state.physical_time();
    let grid: Grid = state.grid().stretched(state.eps())?;
    let frame = assemble_frame_with_derivatives(state, t, &grid, Fidelity::Extended)?;
    residuals(&frame, s, false)
}

/// Residuals of the KdV-only baseline: same `U`, `V`, every corrector removed.
pub fn kdv_only_residuals(state: &ModulationState, s: f64) -> Result<ResidualSample> {
    state_residuals(&state.with_level(ModelLevel::KdvOnly), s)
}
