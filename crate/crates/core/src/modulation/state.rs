use serde::{Deserialize, Serialize};

use super::system::{Components, ModelLevel};
use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

/// Snapshot of the whole hierarchy at intermediate time `tau`.
///
/// Fields are stored in laboratory variables on one beta-grid; the comoving
/// profiles `U`, `V`, `F`, `G`, `phi^-`, `phi^+` are recovered by exact shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationState {
    eps: f64,
    tau: f64,
    level: ModelLevel,
    fields: Components<Field>,
}

/// Norms watched for boundedness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitoredNorms {
    pub u: f64,
    pub v: f64,
    pub f: f64,
    pub g: f64,
    pub p_minus: f64,
    pub p_plus: f64,
    pub w3: f64,
}

impl ModulationState {
    pub fn new(eps: f64, tau: f64, level: ModelLevel, fields: Components<Field>) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!("eps must lie in (0,1) (got {eps})")));
        }
        let g = *fields.u.grid();
        for f in fields.as_array() {
            g.check_same(f.grid())?;
        }
        Ok(Self { eps, tau, level, fields })
    }

    pub fn zero(grid: Grid, eps: f64, level: ModelLevel) -> Result<Self> {
        Self::new(eps, 0.0, level, Components::zeros(grid))
    }

    /// Data at `tau = 0`: KdV profiles and correctors given, transport and `W3` at rest.
    pub fn from_profiles(
        eps: f64,
        level: ModelLevel,
        u0: Field,
        v0: Field,
        f0: Option<Field>,
        g0: Option<Field>,
    ) -> Result<Self> {
        let grid = *u0.grid();
        let mut c = Components::zeros(grid);
        c.u = u0;
        c.v = v0;
        if level == ModelLevel::Full {
            if let Some(f) = f0 {
                c.f = f;
            }
            if let Some(g) = g0 {
                c.g = g;
            }
        }
        Self::new(eps, 0.0, level, c)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `T = eps^2 tau`.
    pub fn slow_time(&self) -> f64 {
        self.eps * self.eps * self.tau
    }

    /// `t = tau / eps`.
    pub fn physical_time(&self) -> f64 {
        self.tau / self.eps
    }

    pub fn level(&self) -> ModelLevel {
        self.level
    }

    pub fn grid(&self) -> &Grid {
        self.fields.u.grid()
    }

    pub fn fields(&self) -> &Components<Field> {
        &self.fields
    }

    pub(crate) fn replace(&mut self, tau: f64, fields: Components<Field>) {
        self.tau = tau;
        self.fields = fields;
    }

    /// Comoving `U(beta_-)`.
    pub fn u(&self) -> Field {
        self.fields.u.shift(self.tau)
    }

    pub fn v(&self) -> Field {
        self.fields.v.shift(-self.tau)
    }

    pub fn f(&self) -> Field {
        self.fields.f.shift(self.tau)
    }

    pub fn g(&self) -> Field {
        self.fields.g.shift(-self.tau)
    }

    pub fn p_minus(&self) -> &Field {
        &self.fields.p_minus
    }

    pub fn p_plus(&self) -> &Field {
        &self.fields.p_plus
    }

    pub fn p(&self) -> Field {
        &self.fields.p_minus + &self.fields.p_plus
    }

    pub fn phi_minus(&self) -> Field {
        self.fields.p_minus.shift(self.tau)
    }

    pub fn phi_plus(&self) -> Field {
        self.fields.p_plus.shift(-self.tau)
    }

    pub fn w3(&self) -> Field {
        &self.fields.a_minus + &self.fields.a_plus
    }

    /// `d_tau W3 = d_beta (a^+ - a^-)`.
    pub fn w3_dot(&self) -> Field {
        (&self.fields.a_plus - &self.fields.a_minus).d()
    }

    pub fn monitored_norms(&self, s: f64) -> MonitoredNorms {
        let c = &self.fields;
        MonitoredNorms {
            u: c.u.sobolev(s),
            v: c.v.sobolev(s),
            f: c.f.sobolev(s),
            g: c.g.sobolev(s),
            p_minus: c.p_minus.sobolev(s),
            p_plus: c.p_plus.sobolev(s),
            w3: self.w3().sobolev(s),
        }
    }

    pub fn boundary_magnitude(&self) -> f64 {
        self.fields.as_array().iter().fold(0.0_f64, |m, f| m.max(f.boundary_magnitude()))
    }

    pub fn is_finite(&self) -> bool {
        self.fields.as_array().iter().all(|f| f.is_finite())
    }

    /// Every field translated by `c` (values at `beta` move to `beta + c`).
    pub fn translated(&self, c: f64) -> Self {
        Self { fields: self.fields.map(|f| f.shift(-c)), ..self.clone() }
    }

    /// Same state with a different model level (correctors zeroed for `KdvOnly`).
    pub fn with_level(&self, level: ModelLevel) -> Self {
        let mut out = self.clone();
        out.level = level;
        if level == ModelLevel::KdvOnly {
            let g = *self.grid();
            let c = &mut out.fields;
            for f in [&mut c.f, &mut c.g, &mut c.p_minus, &mut c.p_plus, &mut c.a_minus, &mut c.a_plus] {
                *f = Field::zeros(g);
            }
        }
        out
    }
}
