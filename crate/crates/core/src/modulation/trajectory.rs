use crate::error::{Error, Result};
use crate::spectral::Field;

/// Time-stamped snapshots with strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    times: Vec<f64>,
    states: Vec<S>,
}

impl<S> Default for Trajectory<S> {
    fn default() -> Self {
        Self { times: Vec::new(), states: Vec::new() }
    }
}

impl<S> Trajectory<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64, state: S) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(Error::InvalidArgument(format!("snapshot time {t} not after {last}")));
            }
        }
        self.times.push(t);
        self.states.push(state);
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &S)> {
        self.states.last().map(|s| (*self.times.last().unwrap(), s))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }

    pub fn map<R>(&self, f: impl FnMut(&S) -> R) -> Trajectory<R> {
        Trajectory { times: self.times.clone(), states: self.states.iter().map(f).collect() }
    }

    /// Same states, times transformed by an increasing map.
    pub fn retimed(self, f: impl Fn(f64) -> f64) -> Trajectory<S> {
        Trajectory { times: self.times.iter().map(|&t| f(t)).collect(), states: self.states }
    }

    fn covering_window(&self, t: f64) -> Result<(usize, usize)> {
        let (start, end) = match (self.times.first(), self.times.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Error::BackgroundGap { t, start: f64::NAN, end: f64::NAN }),
        };
        let tol = 1e-10 * (end - start).abs().max(1.0);
        if t < start - tol || t > end + tol {
            return Err(Error::BackgroundGap { t, start, end });
        }
        let n = self.times.len();
        let i = self.times.partition_point(|&x| x <= t).saturating_sub(1).min(n - 1);
        let lo = i.saturating_sub(1).min(n.saturating_sub(4));
        let hi = (lo + 4).min(n);
        Ok((lo, hi))
    }
}

impl Trajectory<Field> {
    /// Cubic Lagrange interpolation between the four snapshots around `t`.
    pub fn sample(&self, t: f64) -> Result<Field> {
        let (lo, hi) = self.covering_window(t)?;
        if let Some(j) = (lo..hi).find(|&j| self.times[j] == t) {
            return Ok(self.states[j].clone());
        }
        let mut out = Field::zeros(*self.states[lo].grid());
        for j in lo..hi {
            let mut w = 1.0;
            for m in lo..hi {
                if m != j {
                    w *= (t - self.times[m]) / (self.times[j] - self.times[m]);
                }
            }
            out.axpy(w, &self.states[j]);
        }
        Ok(out)
    }
}
