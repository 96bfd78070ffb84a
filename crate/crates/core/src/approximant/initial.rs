use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modulation::{Components, ModelLevel, ModulationState};
use crate::spectral::{Field, Grid};

/// Where the first-order correction of the initial data is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialConvention {
    /// `F(0) = F0`, `G(0) = G0`, transport at rest.
    Correctors,
    /// `phi^-(0) = F0`, `phi^+(0) = G0`, correctors at rest.
    Transport,
}

/// Modulation initial data derived from laboratory profiles `Theta_y`, `Theta_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialDataMap {
    pub theta_y: Field,
    pub theta_u: Field,
    pub u0: Field,
    pub v0: Field,
    pub f0: Field,
    pub g0: Field,
    /// `X1(beta) = -int_0^beta (U0 + V0)`.
    pub x1: Field,
    /// `X2(beta) = -int_0^beta (F0 + G0)`; not periodic when `F0 + G0` has nonzero mean.
    pub x2: Field,
    /// Mean of `F0 + G0`, the slope of the secular part of `X2`.
    pub x2_drift: f64,
}

fn mean_zero_scale(f: &Field) -> f64 {
    f.l2() / f.grid().length().sqrt()
}

/// `-int_0^beta f`, split into a periodic part and a linear part `-mean * beta`.
fn primitive_from_zero(f: &Field) -> (Field, f64) {
    let m = f.mean();
    let centered = f.map(|x| x - m);
    let anti = centered.antiderivative_projected();
    let at_zero = anti.eval_at(0.0);
    let grid = *f.grid();
    let values = anti.values().iter().zip(grid.points()).map(|(a, x)| -(a - at_zero) - m * x).collect();
    (Field::from_values(grid, values).expect("same grid"), m)
}

/// Splits laboratory initial profiles into KdV and linearized-KdV initial data.
pub fn split_initial_data(theta_y: &Field, theta_u: &Field, _eps: f64) -> Result<InitialDataMap> {
    theta_y.grid().check_same(theta_u.grid())?;
    let scale = mean_zero_scale(theta_y).max(f64::MIN_POSITIVE);
    if theta_y.mean().abs() > 1e-12 * scale {
        return Err(Error::ZeroModePresent(format!(
            "Theta_y has mean {:e}; X1 = -int Theta_y would not be periodic",
            theta_y.mean()
        )));
    }
    let u0 = 0.5 * &(theta_y + theta_u);
    let v0 = 0.5 * &(theta_y - theta_u);
    let (x1, _) = primitive_from_zero(&(&u0 + &v0));
    let u2 = u0.derivative(2);
    let v2 = v0.derivative(2);
    let h_y = x1.mul_dealiased(&theta_y.d()) - (1.0 / 3.0) * &u2 - (1.0 / 3.0) * &v2 - (&u0 + &v0).square();
    let h_u = x1.mul_dealiased(&theta_u.d()) - (1.0 / 6.0) * &u2 + (1.0 / 6.0) * &v2 - 0.75 * &u0.square()
        + 0.75 * &v0.square();
    let f0 = 0.5 * &(&h_y + &h_u);
    let g0 = 0.5 * &(&h_y - &h_u);
    let (x2, x2_drift) = primitive_from_zero(&(&f0 + &g0));
    Ok(InitialDataMap { theta_y: theta_y.clone(), theta_u: theta_u.clone(), u0, v0, f0, g0, x1, x2, x2_drift })
}

impl InitialDataMap {
    pub fn grid(&self) -> &Grid {
        self.u0.grid()
    }

    /// Modulation state at `tau = 0` carrying this data.
    pub fn to_state(&self, eps: f64, level: ModelLevel, convention: InitialConvention) -> Result<ModulationState> {
        let mut c = Components::zeros(*self.grid());
        c.u = self.u0.clone();
        c.v = self.v0.clone();
        if level == ModelLevel::Full {
            match convention {
                InitialConvention::Correctors => {
                    c.f = self.f0.clone();
                    c.g = self.g0.clone();
                }
                InitialConvention::Transport => {
                    c.p_minus = self.f0.clone();
                    c.p_plus = self.g0.clone();
                }
            }
        }
        ModulationState::new(eps, 0.0, level, c)
    }

    /// `eps^2 Theta(beta + eps^2 X1(beta) + eps^4 X2(beta))` for `Theta_y` and `Theta_u`, on the alpha-grid.
    ///
    /// This is the laboratory data seen through the reparameterized surface label.
    pub fn reparameterized(&self, eps: f64) -> Result<(Field, Field)> {
        let grid = *self.grid();
        let e2 = eps * eps;
        let xs: Vec<f64> = grid
            .points()
            .iter()
            .zip(self.x1.values().iter().zip(self.x2.values()))
            .map(|(b, (x1, x2))| b + e2 * x1 + e2 * e2 * x2)
            .collect();
        let alpha = grid.stretched(eps)?;
        let y = Field::from_values(alpha, self.theta_y.eval_many(&xs).into_iter().map(|v| e2 * v).collect())?;
        let u = Field::from_values(alpha, self.theta_u.eval_many(&xs).into_iter().map(|v| e2 * v).collect())?;
        Ok((y, u))
    }
}
