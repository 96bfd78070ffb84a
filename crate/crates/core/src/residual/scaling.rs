use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::ResidualSample;
use crate::error::{Error, Result};

/// Least-squares fit of `log(norm) = slope * log(eps) + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub eps_values: Vec<f64>,
    pub norms: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the log-space residuals.
    pub residual_of_fit: f64,
    /// Standard error of the slope.
    pub slope_stderr: f64,
}

pub fn fit_slope(eps_values: &[f64], norms: &[f64]) -> Result<ScalingReport> {
    if eps_values.len() != norms.len() {
        return Err(Error::FitSamples(format!("{} eps values, {} norms", eps_values.len(), norms.len())));
    }
    if eps_values.len() < 4 {
        return Err(Error::FitSamples(format!("need at least 4 samples, got {}", eps_values.len())));
    }
    if let Some(bad) = norms.iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::FitSamples(format!("norm sample {bad} is not positive")));
    }
    if let Some(bad) = eps_values.iter().find(|&&e| !(e > 0.0)) {
        return Err(Error::FitSamples(format!("eps value {bad} is not positive")));
    }
    let x: Vec<f64> = eps_values.iter().map(|e| e.ln()).collect();
    let y: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(&y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    Ok(ScalingReport {
        eps_values: eps_values.to_vec(),
        norms: norms.to_vec(),
        slope,
        intercept,
        residual_of_fit: (sse / n).sqrt(),
        slope_stderr: (sse / (n - 2.0) / sxx).sqrt(),
    })
}

/// Residual samples across an eps ladder with per-component slope fits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub samples: Vec<ResidualSample>,
    pub res_z: ScalingReport,
    pub res_y: ScalingReport,
    pub res_u: ScalingReport,
}

impl ScalingTable {
    /// Fits `res_y` and `res_u`; `res_z` is fitted too but may sit at round-off.
    ///
    /// The eps values must span at least a factor of three.
    pub fn from_samples(samples: Vec<ResidualSample>) -> Result<Self> {
        let eps: Vec<f64> = samples.iter().map(|s| s.eps).collect();
        let (lo, hi) = eps.iter().fold((f64::INFINITY, 0.0_f64), |(a, b), &e| (a.min(e), b.max(e)));
        if hi < 3.0 * lo * (1.0 - 1e-12) {
            return Err(Error::FitSamples(format!("eps values span [{lo}, {hi}], less than a factor of 3")));
        }
        let col = |f: fn(&ResidualSample) -> f64| samples.iter().map(f).collect::<Vec<_>>();
        let z = col(|s| s.res_z_norm.max(f64::MIN_POSITIVE));
        Ok(Self {
            res_z: fit_slope(&eps, &z)?,
            res_y: fit_slope(&eps, &col(|s| s.res_y_norm))?,
            res_u: fit_slope(&eps, &col(|s| s.res_u_norm))?,
            samples,
        })
    }

    /// Columns `eps,res_z,res_y,res_u`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,res_z,res_y,res_u\n");
        for s in &self.samples {
            let _ = writeln!(out, "{:.17e},{:.17e},{:.17e},{:.17e}", s.eps, s.res_z_norm, s.res_y_norm, s.res_u_norm);
        }
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        let rep = |r: &ScalingReport| {
            serde_json::json!({
                "slope": r.slope,
                "intercept": r.intercept,
                "residual_of_fit": r.residual_of_fit,
                "slope_stderr": r.slope_stderr,
            })
        };
        serde_json::json!({
            "res_z": rep(&self.res_z),
            "res_y": rep(&self.res_y),
            "res_u": rep(&self.res_u),
            "max_res_z": self.samples.iter().fold(0.0_f64, |m, s| m.max(s.res_z_norm)),
        })
    }
}
