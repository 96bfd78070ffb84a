use serde::{Deserialize, Serialize};

use super::field::Field;
use crate::error::{Error, Result};

/// Regularity index of an unweighted Sobolev norm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SobolevIndex(f64);

impl SobolevIndex {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::InvalidArgument(format!("Sobolev index {s} must be finite and >= 0")));
        }
        Ok(Self(s))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// `(length * sum_k (1+k^2)^s |c_k|^2)^(1/2)` with normalized coefficients `c_k`.
///
/// The weight `length` makes a pure mode reproduce its continuum norm on any grid.
pub fn sobolev_norm(f: &Field, s: f64) -> f64 {
    let c = f.coefficients();
    let g = f.grid();
    let sum: f64 = c
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let k = g.wavenumber(i);
            (1.0 + k * k).powf(s) * z.norm_sqr()
        })
        .sum();
    (g.length() * sum).sqrt()
}

impl Field {
    pub fn sobolev(&self, s: f64) -> f64 {
        sobolev_norm(self, s)
    }
}
