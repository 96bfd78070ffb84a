use num_complex::Complex64;

use crate::error::Result;
use crate::spectral::Field;

/// Integrating-factor RK4 (Lawson) for `dX/dt = L X + N(t, X)` with diagonal `L`.
#[derive(Debug, Clone)]
pub struct IfRk4 {
    symbols: Vec<Vec<Complex64>>,
}

fn exp_table(sym: &[Complex64], h: f64) -> Vec<Complex64> {
    sym.iter().map(|s| (s * h).exp()).collect()
}

fn combine(grid: crate::spectral::Grid, c: Vec<Complex64>) -> Field {
    Field::from_coefficients(grid, &c).expect("coefficient count matches grid")
}

impl IfRk4 {
    /// One symbol table (FFT order) per component.
    pub fn new(symbols: Vec<Vec<Complex64>>) -> Self {
        Self { symbols }
    }

    pub fn components(&self) -> usize {
        self.symbols.len()
    }

    pub fn step<F>(&self, state: &[Field], t: f64, h: f64, mut nonlinear: F) -> Result<Vec<Field>>
    where
        F: FnMut(f64, &[Field]) -> Result<Vec<Field>>,
    {
        debug_assert_eq!(state.len(), self.symbols.len());
        let e: Vec<Vec<Complex64>> = self.symbols.iter().map(|s| exp_table(s, h)).collect();
        let e2: Vec<Vec<Complex64>> = self.symbols.iter().map(|s| exp_table(s, 0.5 * h)).collect();
        let grids: Vec<_> = state.iter().map(|f| *f.grid()).collect();
        let uh: Vec<Vec<Complex64>> = state.iter().map(|f| f.coefficients()).collect();
        let spectra = |fs: Vec<Field>| -> Vec<Vec<Complex64>> { fs.iter().map(|f| f.coefficients()).collect() };

        let a = spectra(nonlinear(t, state)?);
        let sa: Vec<Field> = (0..state.len())
            .map(|i| combine(grids[i], (0..uh[i].len()).map(|j| e2[i][j] * (uh[i][j] + 0.5 * h * a[i][j])).collect()))
            .collect();
        let b = spectra(nonlinear(t + 0.5 * h, &sa)?);
        let sb: Vec<Field> = (0..state.len())
            .map(|i| combine(grids[i], (0..uh[i].len()).map(|j| e2[i][j] * uh[i][j] + 0.5 * h * b[i][j]).collect()))
            .collect();
        let c = spectra(nonlinear(t + 0.5 * h, &sb)?);
        let sc: Vec<Field> = (0..state.len())
            .map(|i| combine(grids[i], (0..uh[i].len()).map(|j| e[i][j] * uh[i][j] + h * e2[i][j] * c[i][j]).collect()))
            .collect();
        let d = spectra(nonlinear(t + h, &sc)?);
        Ok((0..state.len())
            .map(|i| {
                combine(
                    grids[i],
                    (0..uh[i].len())
                        .map(|j| {
                            e[i][j] * uh[i][j]
                                + h / 6.0 * (e[i][j] * a[i][j] + 2.0 * e2[i][j] * (b[i][j] + c[i][j]) + d[i][j])
                        })
                        .collect(),
                )
            })
            .collect())
    }
}

/// Number of equal steps of size at most `dt` covering `span`, and the step itself.
pub(crate) fn partition(span: f64, dt: f64) -> (usize, f64) {
    if span <= 0.0 {
        return (0, 0.0);
    }
    let n = (span / dt - 1e-9).ceil().max(1.0) as usize;
    (n, span / n as f64)
}
