use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    // plans are cached per thread by the planner itself
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward transform in place.
pub(crate) fn forward(data: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(data.len()));
    plan.process(data);
}

/// Unnormalized inverse transform in place.
pub(crate) fn inverse(data: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(data.len()));
    plan.process(data);
}

/// Normalized coefficients `c_k = (1/n) sum_j f_j e^{-2 pi i jk/n}`.
pub(crate) fn coefficients(values: &[f64]) -> Vec<Complex64> {
    let n = values.len() as f64;
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    for c in buf.iter_mut() {
        *c /= n;
    }
    buf
}

/// Complex samples from normalized coefficients.
pub(crate) fn synthesize(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    inverse(&mut buf);
    buf
}

/// Zero-pad normalized coefficients of length `n` to length `m > n` (Nyquist dropped).
pub(crate) fn pad(coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    let n = coeffs.len();
    let h = n / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    out[..h].copy_from_slice(&coeffs[..h]);
    // negative modes, skipping the Nyquist slot at index h
    for i in h + 1..n {
        out[m - (n - i)] = coeffs[i];
    }
    out
}

/// Inverse of [`pad`]: keep modes `|j| < n/2`, Nyquist set to zero.
pub(crate) fn truncate(coeffs: &[Complex64], n: usize) -> Vec<Complex64> {
    let m = coeffs.len();
    let h = n / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    out[..h].copy_from_slice(&coeffs[..h]);
    for i in h + 1..n {
        out[i] = coeffs[m - (n - i)];
    }
    out
}

/// Physical samples on the padded `3n/2` grid.
pub(crate) fn padded_values(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let m = 3 * n / 2;
    let c = coefficients(values);
    let mut p = pad(&c, m);
    inverse(&mut p);
    p.into_iter().map(|z| z.re).collect()
}

/// Back from padded physical samples to `n` samples, dropping the top third.
pub(crate) fn unpadded_values(padded: &[f64], n: usize) -> Vec<f64> {
    let c = coefficients(padded);
    let mut t = truncate(&c, n);
    inverse(&mut t);
    t.into_iter().map(|z| z.re).collect()
}
