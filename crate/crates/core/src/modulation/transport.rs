use super::stepper::{partition, IfRk4};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::{Field, Multiplier};

/// Transport fields at one `tau`, in laboratory variables.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportSlice {
    pub tau: f64,
    pub p_minus: Field,
    pub p_plus: Field,
}

impl TransportSlice {
    /// Comoving profile `phi^-(beta_-)`, i.e. `P^-` pulled back by the elapsed `tau`.
    pub fn phi_minus(&self) -> Field {
        self.p_minus.shift(self.tau)
    }

    pub fn phi_plus(&self) -> Field {
        self.p_plus.shift(-self.tau)
    }

    pub fn total(&self) -> Field {
        &self.p_minus + &self.p_plus
    }
}

/// Output of [`transport_evolve`]: snapshots in `tau`.
#[derive(Debug, Clone)]
pub struct TransportSolution {
    pub eps: f64,
    pub trajectory: Trajectory<TransportSlice>,
}

impl TransportSolution {
    /// `phi^-` as a function of the slow time `T = eps^2 tau`.
    pub fn phi_minus_slow(&self) -> Trajectory<Field> {
        let e2 = self.eps * self.eps;
        self.trajectory.map(|s| s.phi_minus()).retimed(|t| e2 * t)
    }

    pub fn phi_plus_slow(&self) -> Trajectory<Field> {
        let e2 = self.eps * self.eps;
        self.trajectory.map(|s| s.phi_plus()).retimed(|t| e2 * t)
    }
}

/// Laboratory fields `u(beta) = U(beta - tau)` and `v(beta) = V(beta + tau)` from comoving trajectories in `T`.
pub(crate) fn lab_pair(u: &Trajectory<Field>, v: &Trajectory<Field>, eps: f64, tau: f64) -> Result<(Field, Field)> {
    let t = eps * eps * tau;
    Ok((u.sample(t)?.shift(-tau), v.sample(t)?.shift(tau)))
}

/// Solves `P^-_tau + P^-_beta = -(3/2)(UV)'` and `P^+_tau - P^+_beta = (3/2)(UV)'` from zero data.
///
/// The advection is carried exactly by the shift semigroup; the shifted source is
/// integrated with the integrating-factor RK4 quadrature.
pub fn transport_evolve(
    u: &Trajectory<Field>,
    v: &Trajectory<Field>,
    eps: f64,
    tau_end: f64,
    dtau: f64,
) -> Result<TransportSolution> {
    transport_evolve_strided(u, v, eps, tau_end, dtau, 1)
}

pub fn transport_evolve_strided(
    u: &Trajectory<Field>,
    v: &Trajectory<Field>,
    eps: f64,
    tau_end: f64,
    dtau: f64,
    stride: usize,
) -> Result<TransportSolution> {
    if !(dtau > 0.0) {
        return Err(Error::InvalidArgument(format!("dtau must be positive (got {dtau})")));
    }
    let grid = *u.states().first().ok_or(Error::BackgroundGap { t: 0.0, start: f64::NAN, end: f64::NAN })?.grid();
    let d = Multiplier::derivative(1).values_on(&grid)?;
    let dm = d.iter().map(|z| -z).collect();
    let stepper = IfRk4::new(vec![dm, d]);
    let stride = stride.max(1);
    let (steps, h) = partition(tau_end, dtau);
    let mut traj = Trajectory::new();
    let mut state = vec![Field::zeros(grid), Field::zeros(grid)];
    traj.push(0.0, TransportSlice { tau: 0.0, p_minus: state[0].clone(), p_plus: state[1].clone() })?;
    for i in 1..=steps {
        state = stepper.step(&state, (i - 1) as f64 * h, h, |tau, _| {
            let (ul, vl) = lab_pair(u, v, eps, tau)?;
            let src = (&ul * &vl).d();
            Ok(vec![-1.5 * &src, 1.5 * &src])
        })?;
        if i % stride == 0 || i == steps {
            let tau = i as f64 * h;
            traj.push(tau, TransportSlice { tau, p_minus: state[0].clone(), p_plus: state[1].clone() })?;
        }
    }
    Ok(TransportSolution { eps, trajectory: traj })
}
