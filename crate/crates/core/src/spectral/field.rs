use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Real samples on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: Grid) -> Self {
        Self { values: vec![0.0; grid.n()], grid }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self { values: vec![c; grid.n()], grid }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        Self { grid, values }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::SampleCount { expected: grid.n(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    /// Real part of the series with normalized coefficients `coeffs`.
    pub fn from_coefficients(grid: Grid, coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(Error::SampleCount { expected: grid.n(), got: coeffs.len() });
        }
        let values = fft::synthesize(coeffs).into_iter().map(|z| z.re).collect();
        Ok(Self { grid, values })
    }

    pub(crate) fn from_coefficients_unchecked(grid: Grid, coeffs: &[Complex64]) -> Self {
        let values = fft::synthesize(coeffs).into_iter().map(|z| z.re).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Normalized Fourier coefficients in FFT order.
    pub fn coefficients(&self) -> Vec<Complex64> {
        fft::coefficients(&self.values)
    }

    /// Same samples on another grid with the same point count.
    pub fn relabel(&self, grid: Grid) -> Result<Field> {
        if grid.n() != self.grid.n() {
            return Err(Error::SampleCount { expected: grid.n(), got: self.values.len() });
        }
        Ok(Field { grid, values: self.values.clone() })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        debug_assert_eq!(self.values.len(), other.values.len());
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Field { grid: self.grid, values }
    }

    pub fn scale(&self, a: f64) -> Field {
        self.map(|v| a * v)
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: f64, x: &Field) {
        for (s, &v) in self.values.iter_mut().zip(&x.values) {
            *s += a * v;
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Rectangle-rule quadrature over one period (spectrally accurate).
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.spacing()
    }

    /// Continuum L2 norm via quadrature.
    pub fn l2(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.spacing()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the largest sample.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Largest magnitude among the samples nearest the two ends of the period.
    pub fn boundary_magnitude(&self) -> f64 {
        let n = self.values.len();
        let w = (n / 64).max(1);
        self.values[..w].iter().chain(&self.values[n - w..]).fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest coefficient in the top third of the spectrum relative to the largest overall.
    pub fn spectral_tail(&self) -> f64 {
        let c = self.coefficients();
        let peak = c.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if peak == 0.0 {
            return 0.0;
        }
        let cut = self.grid.n() as i64 / 3;
        let tail = (0..c.len()).filter(|&i| self.grid.mode(i).abs() >= cut).fold(0.0_f64, |m, i| m.max(c[i].norm()));
        tail / peak
    }

    /// `m`-th spectral derivative.
    pub fn derivative(&self, m: u32) -> Field {
        if m == 0 {
            return self.clone();
        }
        let mut c = self.coefficients();
        for (i, z) in c.iter_mut().enumerate() {
            let k = self.grid.wavenumber(i);
            *z *= Complex64::new(0.0, k).powu(m);
        }
        if m % 2 == 1 {
            c[self.grid.nyquist_index()] = Complex64::new(0.0, 0.0);
        }
        Field::from_coefficients_unchecked(self.grid, &c)
    }

    pub fn d(&self) -> Field {
        self.derivative(1)
    }

    /// Periodic antiderivative with zero mean; the field itself must be mean-zero.
    pub fn antiderivative(&self) -> Result<Field> {
        let mut c = self.coefficients();
        let scale = self.values.iter().map(|v| v * v).sum::<f64>().sqrt() / (self.len() as f64).sqrt();
        if c[0].norm() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::ZeroModePresent(format!("mean {:e}", c[0].re)));
        }
        Ok(self.antiderivative_projected_from(&mut c))
    }

    /// Antiderivative of the mean-free part (the mean is silently dropped).
    pub fn antiderivative_projected(&self) -> Field {
        let mut c = self.coefficients();
        self.antiderivative_projected_from(&mut c)
    }

    fn antiderivative_projected_from(&self, c: &mut [Complex64]) -> Field {
        c[0] = Complex64::new(0.0, 0.0);
        c[self.grid.nyquist_index()] = Complex64::new(0.0, 0.0);
        for (i, z) in c.iter_mut().enumerate().skip(1) {
            let k = self.grid.wavenumber(i);
            *z /= Complex64::new(0.0, k);
        }
        Field::from_coefficients_unchecked(self.grid, c)
    }

    /// `f(x + c)`, exact for band-limited data.
    pub fn shift(&self, c: f64) -> Field {
        if c == 0.0 {
            return self.clone();
        }
        let mut coeffs = self.coefficients();
        let nyq = self.grid.nyquist_index();
        for (i, z) in coeffs.iter_mut().enumerate() {
            let k = self.grid.wavenumber(i);
            if i == nyq {
                *z *= (k * c).cos();
            } else {
                *z *= Complex64::from_polar(1.0, k * c);
            }
        }
        Field::from_coefficients_unchecked(self.grid, &coeffs)
    }

    /// Product with the top third of the spectrum removed (3/2 zero padding).
    pub fn mul_dealiased(&self, other: &Field) -> Field {
        debug_assert!(self.grid.same_as(&other.grid));
        let n = self.len();
        let a = fft::padded_values(&self.values);
        let b = fft::padded_values(&other.values);
        let p: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        Field { grid: self.grid, values: fft::unpadded_values(&p, n) }
    }

    /// Plain collocation product.
    pub fn mul_pointwise(&self, other: &Field) -> Field {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn div_pointwise(&self, other: &Field) -> Field {
        self.zip_map(other, |a, b| a / b)
    }

    pub fn square(&self) -> Field {
        self.mul_dealiased(self)
    }

    /// Zero every mode with `|j| >= n/3` (two-thirds rule).
    pub fn filter_two_thirds(&self) -> Field {
        let mut c = self.coefficients();
        let cut = self.grid.n() as i64 / 3;
        for (i, z) in c.iter_mut().enumerate() {
            if self.grid.mode(i).abs() >= cut {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        Field::from_coefficients_unchecked(self.grid, &c)
    }

    /// Trigonometric interpolant evaluated at an arbitrary coordinate.
    pub fn eval_at(&self, x: f64) -> f64 {
        let c = self.coefficients();
        let nyq = self.grid.nyquist_index();
        let x0 = x - self.grid.origin();
        let mut s = 0.0;
        for (i, z) in c.iter().enumerate() {
            let k = self.grid.wavenumber(i);
            if i == nyq {
                s += z.re * (k * x0).cos();
            } else {
                s += (z * Complex64::from_polar(1.0, k * x0)).re;
            }
        }
        s
    }

    /// Evaluate the interpolant at many points (one transform).
    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        let c = self.coefficients();
        let nyq = self.grid.nyquist_index();
        let ks = self.grid.wavenumbers();
        xs.iter()
            .map(|&x| {
                let x0 = x - self.grid.origin();
                let mut s = 0.0;
                for (i, z) in c.iter().enumerate() {
                    if i == nyq {
                        s += z.re * (ks[i] * x0).cos();
                    } else {
                        s += (z * Complex64::from_polar(1.0, ks[i] * x0)).re;
                    }
                }
                s
            })
            .collect()
    }
}

impl Add for &Field {
    type Output = Field;
    fn add(self, rhs: &Field) -> Field {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Add for Field {
    type Output = Field;
    fn add(mut self, rhs: Field) -> Field {
        self += &rhs;
        self
    }
}

impl Sub for Field {
    type Output = Field;
    fn sub(mut self, rhs: Field) -> Field {
        self -= &rhs;
        self
    }
}

impl AddAssign<&Field> for Field {
    fn add_assign(&mut self, rhs: &Field) {
        for (a, b) in self.values.iter_mut().zip(&rhs.values) {
            *a += b;
        }
    }
}

impl SubAssign<&Field> for Field {
    fn sub_assign(&mut self, rhs: &Field) {
        for (a, b) in self.values.iter_mut().zip(&rhs.values) {
            *a -= b;
        }
    }
}

impl Neg for &Field {
    type Output = Field;
    fn neg(self) -> Field {
        self.map(|v| -v)
    }
}

impl Neg for Field {
    type Output = Field;
    fn neg(mut self) -> Field {
        for v in self.values.iter_mut() {
            *v = -*v;
        }
        self
    }
}

impl Mul<&Field> for f64 {
    type Output = Field;
    fn mul(self, rhs: &Field) -> Field {
        rhs.scale(self)
    }
}

impl Mul<Field> for f64 {
    type Output = Field;
    fn mul(self, mut rhs: Field) -> Field {
        for v in rhs.values.iter_mut() {
            *v *= self;
        }
        rhs
    }
}

/// Field times field is the dealiased product.
impl Mul<&Field> for &Field {
    type Output = Field;
    fn mul(self, rhs: &Field) -> Field {
        self.mul_dealiased(rhs)
    }
}
