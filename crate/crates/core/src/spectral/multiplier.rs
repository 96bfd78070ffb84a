use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Symmetry class of a symbol, used to keep outputs real.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    EvenReal,
    OddImaginary,
    General,
}

/// Named operators with closed-form symbols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    K0,
    L,
    Linv,
    D,
    Dinv,
    Shift(f64),
    OnePlusK0sq,
}

impl Builtin {
    /// Parse `K0`, `L`, `Linv`, `D`, `Dinv`, `one_plus_K0sq` or `shift(c)`.
    pub fn parse(name: &str) -> Result<Self> {
        let s = name.trim();
        match s {
            "K0" => return Ok(Builtin::K0),
            "L" => return Ok(Builtin::L),
            "Linv" => return Ok(Builtin::Linv),
            "D" => return Ok(Builtin::D),
            "Dinv" => return Ok(Builtin::Dinv),
            "one_plus_K0sq" => return Ok(Builtin::OnePlusK0sq),
            _ => {}
        }
        if let Some(arg) = s.strip_prefix("shift(").and_then(|r| r.strip_suffix(')')) {
            if let Ok(c) = arg.trim().parse::<f64>() {
                return Ok(Builtin::Shift(c));
            }
        }
        Err(Error::UnknownOperator(name.to_string()))
    }
}

/// Long-wave Maclaurin truncations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncated {
    K0eps,
    Leps,
    Linveps,
}

type Symbol = dyn Fn(f64) -> Complex64 + Send + Sync;

/// Fourier multiplier `f -> F^{-1}[sigma(k) f^(k)]`.
#[derive(Clone)]
pub struct Multiplier {
    name: String,
    parity: Parity,
    mean_zero_only: bool,
    symbol: Arc<Symbol>,
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier").field("name", &self.name).field("parity", &self.parity).finish()
    }
}

fn tanh_over_k(k: f64) -> f64 {
    if k.abs() < 1e-4 {
        let k2 = k * k;
        1.0 - k2 / 3.0 + 2.0 * k2 * k2 / 15.0
    } else {
        k.tanh() / k
    }
}

impl Multiplier {
    pub fn new(
        name: impl Into<String>,
        parity: Parity,
        symbol: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), parity, mean_zero_only: false, symbol: Arc::new(symbol) }
    }

    pub fn builtin(which: Builtin) -> Self {
        let i = Complex64::i();
        match which {
            Builtin::K0 => Self::new("K0", Parity::OddImaginary, move |k| -i * k.tanh()),
            Builtin::L => Self::new("L", Parity::EvenReal, |k| Complex64::from(-1.0 / tanh_over_k(k))),
            Builtin::Linv => Self::new("Linv", Parity::EvenReal, |k| Complex64::from(-tanh_over_k(k))),
            Builtin::D => Self::new("D", Parity::OddImaginary, move |k| i * k),
            Builtin::Dinv => {
                let mut m =
                    Self::new(
                        "Dinv",
                        Parity::OddImaginary,
                        move |k| {
                            if k == 0.0 {
                                Complex64::new(0.0, 0.0)
                            } else {
                                -i / k
                            }
                        },
                    );
                m.mean_zero_only = true;
                m
            }
            Builtin::Shift(c) => {
                Self::new(format!("shift({c})"), Parity::General, move |k| Complex64::from_polar(1.0, k * c))
            }
            Builtin::OnePlusK0sq => Self::new("one_plus_K0sq", Parity::EvenReal, |k| {
                let t = k.tanh();
                Complex64::from(1.0 - t * t)
            }),
        }
    }

    /// Builtin by name, e.g. `"K0"` or `"shift(0.5)"`.
    pub fn named(name: &str) -> Result<Self> {
        Ok(Self::builtin(Builtin::parse(name)?))
    }

    /// `m`-th derivative, symbol `(ik)^m`.
    pub fn derivative(m: u32) -> Self {
        let parity = if m.is_multiple_of(2) { Parity::EvenReal } else { Parity::OddImaginary };
        Self::new(format!("D^{m}"), parity, move |k| Complex64::new(0.0, k).powu(m))
    }

    /// Maclaurin polynomial of K0, L or L^{-1} through the given power of k.
    pub fn longwave_truncation(which: Truncated, order: u32) -> Result<Self> {
        let bad = || Error::TruncationOrder { name: format!("{which:?}"), order };
        // coefficients multiply successive powers of (ik)
        let (coeffs, parity, first_power): (Vec<f64>, Parity, u32) = match which {
            Truncated::K0eps => {
                let all = [-1.0, -1.0 / 3.0, -2.0 / 15.0];
                let m = match order {
                    1 => 1,
                    3 => 2,
                    5 => 3,
                    _ => return Err(bad()),
                };
                (all[..m].to_vec(), Parity::OddImaginary, 1)
            }
            Truncated::Leps | Truncated::Linveps => {
                let all = if which == Truncated::Leps {
                    [-1.0, 1.0 / 3.0, 1.0 / 45.0]
                } else {
                    [-1.0, -1.0 / 3.0, -2.0 / 15.0]
                };
                let m = match order {
                    0 => 1,
                    2 => 2,
                    4 => 3,
                    _ => return Err(bad()),
                };
                (all[..m].to_vec(), Parity::EvenReal, 0)
            }
        };
        Ok(Self::new(format!("{which:?}[{order}]"), parity, move |k| {
            let ik = Complex64::new(0.0, k);
            coeffs.iter().enumerate().map(|(j, &a)| a * ik.powu(first_power + 2 * j as u32)).sum()
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn eval(&self, k: f64) -> Complex64 {
        (self.symbol)(k)
    }

    /// `sigma(k) -> sigma(eps k)`: the operator acting in a variable stretched by `1/eps`.
    pub fn scaled(&self, eps: f64) -> Self {
        let inner = self.symbol.clone();
        Self {
            name: format!("{}[eps={eps}]", self.name),
            parity: self.parity,
            mean_zero_only: self.mean_zero_only,
            symbol: Arc::new(move |k| inner(eps * k)),
        }
    }

    /// Product of symbols (composition of operators).
    pub fn compose(&self, other: &Multiplier) -> Self {
        let a = self.symbol.clone();
        let b = other.symbol.clone();
        let parity = match (self.parity, other.parity) {
            (Parity::EvenReal, p) | (p, Parity::EvenReal) => p,
            (Parity::OddImaginary, Parity::OddImaginary) => Parity::EvenReal,
            _ => Parity::General,
        };
        Self {
            name: format!("{}*{}", self.name, other.name),
            parity,
            mean_zero_only: self.mean_zero_only || other.mean_zero_only,
            symbol: Arc::new(move |k| a(k) * b(k)),
        }
    }

    /// Symbol values on a grid in FFT order; the Nyquist slot holds the real-preserving average.
    pub fn values_on(&self, grid: &Grid) -> Result<Vec<Complex64>> {
        let nyq = grid.nyquist_index();
        let mut out = Vec::with_capacity(grid.n());
        for i in 0..grid.n() {
            let k = grid.wavenumber(i);
            let v = if i == nyq {
                let s = 0.5 * (self.eval(k) + self.eval(-k));
                Complex64::new(s.re, 0.0)
            } else {
                self.eval(k)
            };
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFiniteSymbol { name: self.name.clone(), k });
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Coefficient-wise product, returned as complex samples (imaginary part is round-off for real input).
    pub fn apply_complex(&self, f: &Field) -> Result<Vec<Complex64>> {
        let sym = self.values_on(f.grid())?;
        let mut c = f.coefficients();
        if self.mean_zero_only {
            let scale = f.l2() / f.grid().length().sqrt();
            if c[0].norm() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::ZeroModePresent(format!("{} applied to field with mean {:e}", self.name, c[0].re)));
            }
        }
        for (z, s) in c.iter_mut().zip(&sym) {
            *z *= s;
        }
        Ok(super::fft::synthesize(&c))
    }

    pub fn apply(&self, f: &Field) -> Result<Field> {
        let z = self.apply_complex(f)?;
        Field::from_values(*f.grid(), z.into_iter().map(|c| c.re).collect())
    }

    /// Apply with a precomputed symbol table (no checks).
    pub(crate) fn apply_table(sym: &[Complex64], f: &Field) -> Field {
        let mut c = f.coefficients();
        for (z, s) in c.iter_mut().zip(sym) {
            *z *= s;
        }
        Field::from_coefficients_unchecked(*f.grid(), &c)
    }
}

/// Free-function form of [`Multiplier::apply`].
pub fn apply(op: &Multiplier, f: &Field) -> Result<Field> {
    op.apply(f)
}

/// Free-function form of [`Multiplier::builtin`] taking an operator name.
pub fn builtin_symbol(name: &str) -> Result<Multiplier> {
    Multiplier::named(name)
}

/// Free-function form of [`Multiplier::longwave_truncation`].
pub fn longwave_truncation(which: Truncated, order: u32) -> Result<Multiplier> {
    Multiplier::longwave_truncation(which, order)
}
