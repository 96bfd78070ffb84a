use super::jet::Jet;
use super::state::ModulationState;
use super::stepper::{partition, IfRk4};
use super::system::{Components, LabSystem};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::Field;

/// Advances the coupled hierarchy in `tau` with one integrating-factor RK4 step for all unknowns.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    system: LabSystem,
    stepper: IfRk4,
    state: ModulationState,
    dtau: f64,
}

impl Hierarchy {
    pub fn new(state: ModulationState, dtau: f64) -> Result<Self> {
        if !(dtau > 0.0 && dtau.is_finite()) {
            return Err(Error::InvalidArgument(format!("dtau must be positive (got {dtau})")));
        }
        let system = LabSystem::new(*state.grid(), state.eps(), state.level())?;
        let stepper = IfRk4::new(system.linear_symbols().to_vec());
        Ok(Self { system, stepper, state, dtau })
    }

    pub fn state(&self) -> &ModulationState {
        &self.state
    }

    pub fn into_state(self) -> ModulationState {
        self.state
    }

    pub fn system(&self) -> &LabSystem {
        &self.system
    }

    pub fn dtau(&self) -> f64 {
        self.dtau
    }

    fn step_by(&mut self, h: f64) -> Result<()> {
        let current: Vec<Field> = self.state.fields().as_array().iter().map(|f| (*f).clone()).collect();
        let system = &self.system;
        let next = self.stepper.step(&current, self.state.tau(), h, |_, s| {
            let jets = Components::from_array(std::array::from_fn(|i| Jet::constant(s[i].clone(), 0)));
            Ok(system.nonlinear(&jets).into_array().into_iter().map(|j| j.value().clone()).collect())
        })?;
        let tau = self.state.tau() + h;
        let arr: [Field; 8] = next.try_into().expect("eight components");
        for f in &arr {
            if !f.is_finite() || f.max_abs() > 1e8 {
                return Err(Error::BlowUp { t: tau, detail: format!("modulation field reached {:e}", f.max_abs()) });
            }
        }
        self.state.replace(tau, Components::from_array(arr));
        Ok(())
    }

    /// Equal steps no longer than `dtau` landing exactly on `tau`.
    pub fn advance_to(&mut self, tau: f64) -> Result<()> {
        let start = self.state.tau();
        let (steps, h) = partition(tau - start, self.dtau);
        for i in 0..steps {
            self.step_by(h)?;
            if i + 1 == steps {
                let fields = self.state.fields().clone();
                self.state.replace(tau, fields);
            }
        }
        Ok(())
    }

    /// Runs to `tau_end`, recording a snapshot every `every` units of `tau` (and at the end).
    pub fn run(&mut self, tau_end: f64, every: f64) -> Result<Trajectory<ModulationState>> {
        let mut traj = Trajectory::new();
        traj.push(self.state.tau(), self.state.clone())?;
        let start = self.state.tau();
        let n = ((tau_end - start) / every - 1e-9).ceil().max(0.0) as usize;
        for i in 1..=n {
            let target = if i == n { tau_end } else { start + i as f64 * every };
            self.advance_to(target)?;
            traj.push(target, self.state.clone())?;
        }
        Ok(traj)
    }
}
