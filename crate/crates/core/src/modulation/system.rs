use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::formulas::{driving, driving_antiderivative, w3_source};
use super::jet::Jet;
use crate::error::Result;
use crate::spectral::{Field, Grid, Multiplier};

/// Which members of the hierarchy are evolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelLevel {
    /// Only the two KdV profiles; every corrector is held at zero.
    KdvOnly,
    /// KdV, linearized KdV, transport and W3.
    Full,
}

/// The eight laboratory-frame unknowns.
///
/// `u(beta) = U(beta - tau)`, `v(beta) = V(beta + tau)`, likewise `f`, `g` for the correctors;
/// `p_minus`, `p_plus` are the transport fields and `a_minus + a_plus = W3` its characteristic split.
#[derive(Debug, Clone, PartialEq)]
pub struct Components<T> {
    pub u: T,
    pub v: T,
    pub f: T,
    pub g: T,
    pub p_minus: T,
    pub p_plus: T,
    pub a_minus: T,
    pub a_plus: T,
}

pub const COMPONENT_NAMES: [&str; 8] = ["u", "v", "f", "g", "p_minus", "p_plus", "a_minus", "a_plus"];

impl<T> Components<T> {
    pub fn from_array(a: [T; 8]) -> Self {
        let [u, v, f, g, p_minus, p_plus, a_minus, a_plus] = a;
        Self { u, v, f, g, p_minus, p_plus, a_minus, a_plus }
    }

    pub fn into_array(self) -> [T; 8] {
        [self.u, self.v, self.f, self.g, self.p_minus, self.p_plus, self.a_minus, self.a_plus]
    }

    pub fn as_array(&self) -> [&T; 8] {
        [&self.u, &self.v, &self.f, &self.g, &self.p_minus, &self.p_plus, &self.a_minus, &self.a_plus]
    }

    pub fn map<S>(&self, f: impl FnMut(&T) -> S) -> Components<S> {
        Components::from_array(self.as_array().map(f))
    }
}

impl Components<Field> {
    pub fn zeros(grid: Grid) -> Self {
        Components::from_array(std::array::from_fn(|_| Field::zeros(grid)))
    }
}

/// Closed-form fluxes `d_beta^{-1} d_tau X` for each unknown.
#[derive(Debug, Clone)]
pub struct Fluxes {
    pub u: Jet,
    pub v: Jet,
    pub f: Jet,
    pub g: Jet,
    pub p_minus: Jet,
    pub p_plus: Jet,
    pub w3: Jet,
}

/// Laboratory-frame modulation system in the intermediate time `tau`.
#[derive(Debug, Clone)]
pub struct LabSystem {
    eps: f64,
    level: ModelLevel,
    grid: Grid,
    linear: [Vec<Complex64>; 8],
}

impl LabSystem {
    pub fn new(grid: Grid, eps: f64, level: ModelLevel) -> Result<Self> {
        let e2 = eps * eps;
        let right = Multiplier::new("right", crate::spectral::Parity::OddImaginary, move |k| {
            let ik = Complex64::new(0.0, k);
            -ik - e2 / 6.0 * ik.powu(3)
        });
        let left = Multiplier::new("left", crate::spectral::Parity::OddImaginary, move |k| {
            let ik = Complex64::new(0.0, k);
            ik + e2 / 6.0 * ik.powu(3)
        });
        let d = Multiplier::derivative(1);
        let r = right.values_on(&grid)?;
        let l = left.values_on(&grid)?;
        let dp = d.values_on(&grid)?;
        let dm: Vec<Complex64> = dp.iter().map(|z| -z).collect();
        let linear = [r.clone(), l.clone(), r, l, dm.clone(), dp.clone(), dm, dp];
        Ok(Self { eps, level, grid, linear })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn level(&self) -> ModelLevel {
        self.level
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Symbols of the linear part (advection plus dispersion) in FFT order.
    pub fn linear_symbols(&self) -> &[Vec<Complex64>; 8] {
        &self.linear
    }

    /// Everything in `d_tau X` that is not the linear part.
    pub fn nonlinear(&self, s: &Components<Jet>) -> Components<Jet> {
        let e2 = self.eps * self.eps;
        let Components { u, v, f, g, p_minus, p_plus, .. } = s;
        let nu = (-0.75 * e2) * &u.square().dx(1);
        let nv = (0.75 * e2) * &v.square().dx(1);
        let zero = || Jet::zeros(self.grid, u.order());
        if self.level == ModelLevel::KdvOnly {
            return Components {
                u: nu,
                v: nv,
                f: zero(),
                g: zero(),
                p_minus: zero(),
                p_plus: zero(),
                a_minus: zero(),
                a_plus: zero(),
            };
        }
        let nf = (-0.5 * e2) * &(3.0 * &(u * f).dx(1) + driving(u, p_minus));
        let ng = (0.5 * e2) * &(3.0 * &(v * g).dx(1) + driving(v, p_plus));
        let uv_x = (u * v).dx(1);
        let s_src = w3_source(u, v, f, g, p_minus, p_plus);
        Components {
            u: nu,
            v: nv,
            f: nf,
            g: ng,
            p_minus: -1.5 * &uv_x,
            p_plus: 1.5 * &uv_x,
            a_minus: -0.5 * &s_src,
            a_plus: 0.5 * &s_src,
        }
    }

    /// Full `d_tau X`.
    pub fn rates(&self, s: &Components<Jet>) -> Components<Jet> {
        let nl = self.nonlinear(s).into_array();
        let arr = s.as_array();
        let mut i = 0;
        Components::from_array(nl.map(|n| {
            let lin = arr[i].apply_table(&self.linear[i]);
            let masked = self.level == ModelLevel::KdvOnly && i >= 2;
            i += 1;
            if masked {
                n
            } else {
                &lin + &n
            }
        }))
    }

    /// Taylor jets of order `order` in `tau` from a time slice.
    pub fn jets(&self, slice: &Components<Field>, order: usize) -> Components<Jet> {
        let mut s = slice.map(|f| Jet::constant(f.clone(), order));
        for k in 0..order {
            let r = self.rates(&s).into_array();
            let mut arr = s.into_array();
            for (x, rx) in arr.iter_mut().zip(r.iter()) {
                x.set_term(k + 1, rx.term(k).scale(1.0 / (k + 1) as f64));
            }
            s = Components::from_array(arr);
        }
        s
    }

    /// `d_beta^{-1} d_tau` of each unknown, from closed-form antiderivatives.
    pub fn fluxes(&self, s: &Components<Jet>) -> Fluxes {
        let e2 = self.eps * self.eps;
        let Components { u, v, f, g, p_minus, p_plus, a_minus, a_plus } = s;
        let mu = -u + (e2 * &((-1.0 / 6.0) * &u.dx(2) - 0.75 * &u.square()));
        let mv = v + &(e2 * &((1.0 / 6.0) * &v.dx(2) + 0.75 * &v.square()));
        if self.level == ModelLevel::KdvOnly {
            let zero = || Jet::zeros(self.grid, u.order());
            return Fluxes { u: mu, v: mv, f: zero(), g: zero(), p_minus: zero(), p_plus: zero(), w3: zero() };
        }
        let mf = -f + ((-0.5 * e2) * &((1.0 / 3.0) * &f.dx(2) + 3.0 * &(u * f) + driving_antiderivative(u, p_minus)));
        let mg = g + &((0.5 * e2) * &((1.0 / 3.0) * &g.dx(2) + 3.0 * &(v * g) + driving_antiderivative(v, p_plus)));
        let uv = u * v;
        Fluxes {
            u: mu,
            v: mv,
            f: mf,
            g: mg,
            p_minus: -p_minus - 1.5 * &uv,
            p_plus: p_plus + &(1.5 * &uv),
            w3: a_plus - a_minus,
        }
    }
}
