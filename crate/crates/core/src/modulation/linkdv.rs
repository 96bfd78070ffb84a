use super::formulas::driving;
use super::jet::Jet;
use super::kdv::{check_growth, kdv_linear_symbol, Chirality};
use super::stepper::{partition, IfRk4};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::Field;

/// Driving term `J^-` (right, from `U` and `phi^-`) or `J^+` (left, from `V` and `phi^+`).
pub fn j_driving(_chirality: Chirality, w: &Field, phi: &Field) -> Field {
    driving(&Jet::constant(w.clone(), 0), &Jet::constant(phi.clone(), 0)).value().clone()
}

/// `d_T F` for `-2 F_T = (1/3) F''' + 3 (U F)' + J^-` (right) or its left-moving mirror.
pub fn linkdv_rhs(chirality: Chirality, f: &Field, w: &Field, phi: &Field) -> Field {
    let bracket = (1.0 / 3.0) * &f.derivative(3) + 3.0 * &(w * f).d() + j_driving(chirality, w, phi);
    (0.5 * chirality.sign()) * &bracket
}

/// Driven linearized KdV in `T` around background `w(T)` with transport profile `phi(T)`.
///
/// Both backgrounds are comoving profiles sampled in slow time and interpolated cubically.
pub fn linkdv_evolve(
    f0: &Field,
    chirality: Chirality,
    background: &Trajectory<Field>,
    phi: &Trajectory<Field>,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory<Field>> {
    linkdv_evolve_with(f0, chirality, t_end, dt, |t| Ok((background.sample(t)?, phi.sample(t)?)))
}

/// [`linkdv_evolve`] with the backgrounds supplied by a closure.
pub fn linkdv_evolve_with(
    f0: &Field,
    chirality: Chirality,
    t_end: f64,
    dt: f64,
    mut backgrounds: impl FnMut(f64) -> Result<(Field, Field)>,
) -> Result<Trajectory<Field>> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive (got {dt})")));
    }
    let stepper = IfRk4::new(vec![kdv_linear_symbol(f0.grid(), chirality)]);
    let half = 0.5 * chirality.sign();
    let (steps, h) = partition(t_end, dt);
    let mut traj = Trajectory::new();
    traj.push(0.0, f0.clone())?;
    let mut f = vec![f0.clone()];
    let ceiling = 1e8 * f0.l2().max(1.0);
    for i in 1..=steps {
        f = stepper.step(&f, (i - 1) as f64 * h, h, |t, s| {
            let (w, p) = backgrounds(t)?;
            let nl = 3.0 * &(&w * &s[0]).d() + j_driving(chirality, &w, &p);
            Ok(vec![half * &nl])
        })?;
        let t = i as f64 * h;
        // forced growth from rest is legitimate, so only a gross ceiling applies
        check_growth(t, &f[0], 0.0)?;
        if f[0].l2() > ceiling {
            return Err(Error::BlowUp { t, detail: format!("L2 norm {:e} above {ceiling:e}", f[0].l2()) });
        }
        traj.push(t, f[0].clone())?;
    }
    Ok(traj)
}
