use super::formulas::w3_source;
use super::jet::Jet;
use super::stepper::{partition, IfRk4};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::{Field, Multiplier};

/// Comoving slow-time trajectories of everything that drives `W3`.
#[derive(Debug, Clone, Copy)]
pub struct Backgrounds<'a> {
    pub u: &'a Trajectory<Field>,
    pub v: &'a Trajectory<Field>,
    pub f: &'a Trajectory<Field>,
    pub g: &'a Trajectory<Field>,
    pub phi_minus: &'a Trajectory<Field>,
    pub phi_plus: &'a Trajectory<Field>,
}

impl Backgrounds<'_> {
    /// Laboratory fields `(u, v, f, g, P^-, P^+)` at intermediate time `tau`.
    pub fn lab(&self, eps: f64, tau: f64) -> Result<[Field; 6]> {
        let t = eps * eps * tau;
        Ok([
            self.u.sample(t)?.shift(-tau),
            self.v.sample(t)?.shift(tau),
            self.f.sample(t)?.shift(-tau),
            self.g.sample(t)?.shift(tau),
            self.phi_minus.sample(t)?.shift(-tau),
            self.phi_plus.sample(t)?.shift(tau),
        ])
    }
}

/// Source `S` of `W3_tautau - W3_betabeta = d_beta S` from laboratory fields.
pub fn w3_source_field(u: &Field, v: &Field, f: &Field, g: &Field, p_minus: &Field, p_plus: &Field) -> Field {
    let j = |x: &Field| Jet::constant(x.clone(), 0);
    w3_source(&j(u), &j(v), &j(f), &j(g), &j(p_minus), &j(p_plus)).value().clone()
}

/// `W3` split along characteristics: `W3 = a^- + a^+`, `d_tau W3 = d_beta (a^+ - a^-)`.
#[derive(Debug, Clone, PartialEq)]
pub struct W3Slice {
    pub tau: f64,
    pub a_minus: Field,
    pub a_plus: Field,
}

impl W3Slice {
    pub fn w3(&self) -> Field {
        &self.a_minus + &self.a_plus
    }

    pub fn w3_dot(&self) -> Field {
        (&self.a_plus - &self.a_minus).d()
    }
}

/// Solves the W3 wave equation from rest.
///
/// With `a^-_tau = -a^-_beta - S/2` and `a^+_tau = a^+_beta + S/2`, the sum obeys the
/// wave equation with source `d_beta S`; this is the per-mode sine-kernel Duhamel
/// integral rewritten as two exact shift semigroups.
pub fn w3_evolve(bg: &Backgrounds<'_>, eps: f64, tau_end: f64, dtau: f64) -> Result<Trajectory<W3Slice>> {
    if !(dtau > 0.0) {
        return Err(Error::InvalidArgument(format!("dtau must be positive (got {dtau})")));
    }
    let grid = *bg.u.states().first().ok_or(Error::BackgroundGap { t: 0.0, start: f64::NAN, end: f64::NAN })?.grid();
    let d = Multiplier::derivative(1).values_on(&grid)?;
    let dm = d.iter().map(|z| -z).collect();
    let stepper = IfRk4::new(vec![dm, d]);
    let (steps, h) = partition(tau_end, dtau);
    let mut traj = Trajectory::new();
    let mut state = vec![Field::zeros(grid), Field::zeros(grid)];
    traj.push(0.0, W3Slice { tau: 0.0, a_minus: state[0].clone(), a_plus: state[1].clone() })?;
    for i in 1..=steps {
        state = stepper.step(&state, (i - 1) as f64 * h, h, |tau, _| {
            let [u, v, f, g, pm, pp] = bg.lab(eps, tau)?;
            let s = w3_source_field(&u, &v, &f, &g, &pm, &pp);
            Ok(vec![-0.5 * &s, 0.5 * &s])
        })?;
        let tau = i as f64 * h;
        traj.push(tau, W3Slice { tau, a_minus: state[0].clone(), a_plus: state[1].clone() })?;
    }
    Ok(traj)
}
