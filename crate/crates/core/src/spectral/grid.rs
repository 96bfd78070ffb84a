use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic collocation grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    length: f64,
    origin: f64,
}

impl Grid {
    /// `n` must be a power of two no smaller than 8.
    pub fn new(n: usize, length: f64, origin: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::GridSize(n));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::GridLength(length));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidArgument(format!("origin {origin} is not finite")));
        }
        Ok(Self { n, length, origin })
    }

    /// Grid of period `length` centred on zero.
    pub fn centered(n: usize, length: f64) -> Result<Self> {
        Self::new(n, length, -0.5 * length)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.point(j)).collect()
    }

    /// Integer mode number stored at FFT index `idx`, in `-n/2..n/2`.
    pub fn mode(&self, idx: usize) -> i64 {
        let n = self.n as i64;
        let i = idx as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Angular wavenumber at FFT index `idx`.
    pub fn wavenumber(&self, idx: usize) -> f64 {
        2.0 * PI * self.mode(idx) as f64 / self.length
    }

    /// Wavenumbers in FFT storage order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    /// Wavenumbers sorted ascending: `2 pi j / length` for `j = -n/2 .. n/2-1`.
    pub fn wavenumbers_sorted(&self) -> Vec<f64> {
        let h = self.n as i64 / 2;
        (-h..h).map(|j| 2.0 * PI * j as f64 / self.length).collect()
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    pub fn k_max(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    /// The same samples seen in a coordinate stretched by `1/eps`.
    ///
    /// A slow-variable grid in beta becomes the physical alpha grid with
    /// period `length / eps`, so `k_alpha = eps * k_beta`.
    pub fn stretched(&self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("stretch factor {eps} must be positive")));
        }
        Self::new(self.n, self.length / eps, self.origin / eps)
    }

    /// True when both grids carry the same samples (period and origin agree to round-off).
    pub fn same_as(&self, other: &Grid) -> bool {
        let tol = 1e-12 * self.length.abs().max(1.0);
        self.n == other.n && (self.length - other.length).abs() <= tol && (self.origin - other.origin).abs() <= tol
    }

    pub(crate) fn check_same(&self, other: &Grid) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}
