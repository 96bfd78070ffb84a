use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::formulas::dtt_integrand;
use super::jet::Jet;
use super::stepper::{partition, IfRk4};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

/// Direction of propagation: `Right` profiles live in `beta - tau`, `Left` ones in `beta + tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chirality {
    Right,
    Left,
}

impl Chirality {
    /// `-1` for right movers, `+1` for left movers (the sign in front of `d_T`).
    pub fn sign(self) -> f64 {
        match self {
            Chirality::Right => -1.0,
            Chirality::Left => 1.0,
        }
    }
}

/// `d_T W` for the KdV equation `-2 U_T = (1/3) U''' + (3/2)(U^2)'` (right)
/// or `2 V_T = (1/3) V''' + (3/2)(V^2)'` (left).
pub fn kdv_rhs(w: &Field, chirality: Chirality) -> Field {
    let bracket = (1.0 / 3.0) * &w.derivative(3) + 1.5 * &w.square().d();
    (0.5 * chirality.sign()) * &bracket
}

/// True when the upper third of the spectrum is below `1e-10` of the peak.
pub fn is_resolved(w: &Field) -> bool {
    w.spectral_tail() < 1e-10
}

/// `A sech^2(sqrt(3A)/2 (beta - center))`.
///
/// Both chiralities share the profile; under the KdV flow a right mover travels
/// at `+A/2` and a left mover at `-A/2`.
pub fn soliton(grid: Grid, amplitude: f64, center: f64, _chirality: Chirality) -> Result<Field> {
    if !(amplitude > 0.0) {
        return Err(Error::InvalidArgument(format!("soliton amplitude must be positive (got {amplitude})")));
    }
    let kappa = (3.0 * amplitude).sqrt() / 2.0;
    Ok(Field::from_fn(grid, |x| {
        let c = (kappa * (x - center)).cosh();
        amplitude / (c * c)
    }))
}

/// Translation speed in `T` of a soliton of amplitude `A` along `beta`.
pub fn soliton_speed(amplitude: f64, chirality: Chirality) -> f64 {
    -chirality.sign() * amplitude / 2.0
}

/// Second slow-time derivative of a KdV solution, as `d_beta` of the closed-form integrand.
///
/// The same expression holds for both chiralities.
pub fn dtt_closed_form(w: &Field, _chirality: Chirality) -> Field {
    dtt_integrand(&Jet::constant(w.clone(), 0)).value().d()
}

pub(crate) fn kdv_linear_symbol(grid: &Grid, chirality: Chirality) -> Vec<Complex64> {
    let s = chirality.sign();
    grid.wavenumbers()
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            if i == grid.nyquist_index() {
                Complex64::new(0.0, 0.0)
            } else {
                // sign/2 * (1/3)(ik)^3
                0.5 * s / 3.0 * Complex64::new(0.0, k).powu(3)
            }
        })
        .collect()
}

pub(crate) fn check_growth(t: f64, f: &Field, reference: f64) -> Result<()> {
    let norm = f.l2();
    if !norm.is_finite() {
        return Err(Error::BlowUp { t, detail: "non-finite samples".into() });
    }
    if reference > 0.0 && norm > 100.0 * reference {
        return Err(Error::BlowUp { t, detail: format!("L2 norm grew from {reference:e} to {norm:e}") });
    }
    Ok(())
}

/// Integrating-factor RK4 for KdV in `T`, storing every `stride`-th step.
pub fn kdv_evolve_strided(
    w0: &Field,
    chirality: Chirality,
    t_end: f64,
    dt: f64,
    stride: usize,
) -> Result<Trajectory<Field>> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidArgument(format!("need dt > 0 and t_end >= 0 (got {dt}, {t_end})")));
    }
    let cfl = w0.max_abs() * dt / w0.grid().spacing();
    if cfl > 0.5 {
        return Err(Error::StepSize(format!("nonlinear CFL {cfl:.3} exceeds 0.5")));
    }
    let stride = stride.max(1);
    let stepper = IfRk4::new(vec![kdv_linear_symbol(w0.grid(), chirality)]);
    let coef = 0.75 * chirality.sign();
    let reference = w0.l2();
    let (steps, h) = partition(t_end, dt);
    let mut traj = Trajectory::new();
    traj.push(0.0, w0.clone())?;
    let mut w = vec![w0.clone()];
    for i in 1..=steps {
        w = stepper.step(&w, (i - 1) as f64 * h, h, |_, s| Ok(vec![coef * &s[0].square().d()]))?;
        let t = i as f64 * h;
        check_growth(t, &w[0], reference)?;
        if i % stride == 0 || i == steps {
            traj.push(t, w[0].clone())?;
        }
    }
    Ok(traj)
}

/// [`kdv_evolve_strided`] keeping every step.
pub fn kdv_evolve(w0: &Field, chirality: Chirality, t_end: f64, dt: f64) -> Result<Trajectory<Field>> {
    kdv_evolve_strided(w0, chirality, t_end, dt, 1)
}
