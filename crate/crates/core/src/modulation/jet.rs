use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::spectral::{padded_values, unpadded_values, Field, Grid, Multiplier};

/// Truncated Taylor series in time with field coefficients.
///
/// `terms[k]` holds `(1/k!) d^k/dtau^k` of the quantity, so products follow the
/// Cauchy rule and a right-hand side evaluated on a jet of order `k` yields the
/// next coefficient through `X_{k+1} = RHS_k / (k+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    terms: Vec<Field>,
}

impl Jet {
    pub fn constant(f: Field, order: usize) -> Self {
        let grid = *f.grid();
        let mut terms = Vec::with_capacity(order + 1);
        terms.push(f);
        terms.extend((0..order).map(|_| Field::zeros(grid)));
        Self { terms }
    }

    pub fn zeros(grid: Grid, order: usize) -> Self {
        Self { terms: (0..=order).map(|_| Field::zeros(grid)).collect() }
    }

    pub fn from_terms(terms: Vec<Field>) -> Self {
        assert!(!terms.is_empty(), "a jet needs at least its value");
        Self { terms }
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn grid(&self) -> &Grid {
        self.terms[0].grid()
    }

    pub fn value(&self) -> &Field {
        &self.terms[0]
    }

    pub fn term(&self, k: usize) -> &Field {
        &self.terms[k]
    }

    pub fn set_term(&mut self, k: usize, f: Field) {
        self.terms[k] = f;
    }

    pub fn terms(&self) -> &[Field] {
        &self.terms
    }

    /// `k`-th time derivative, `k! * terms[k]`.
    pub fn derivative(&self, k: usize) -> Field {
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        self.terms[k].scale(fact)
    }

    /// Jet of the time derivative; the highest coefficient becomes zero.
    pub fn dt(&self) -> Jet {
        let grid = *self.grid();
        let k = self.order();
        let mut terms: Vec<Field> = (0..k).map(|i| self.terms[i + 1].scale((i + 1) as f64)).collect();
        terms.push(Field::zeros(grid));
        Jet { terms }
    }

    /// Spatial derivative of every coefficient.
    pub fn dx(&self, m: u32) -> Jet {
        Jet { terms: self.terms.iter().map(|f| f.derivative(m)).collect() }
    }

    pub fn apply(&self, op: &Multiplier) -> Result<Jet> {
        Ok(Jet { terms: self.terms.iter().map(|f| op.apply(f)).collect::<Result<_>>()? })
    }

    pub fn map(&self, f: impl Fn(&Field) -> Field) -> Jet {
        Jet { terms: self.terms.iter().map(f).collect() }
    }

    pub fn scale(&self, a: f64) -> Jet {
        self.map(|f| f.scale(a))
    }

    /// Cauchy product with each coefficient product dealiased.
    pub fn mul_jet(&self, other: &Jet) -> Jet {
        let order = self.order().min(other.order());
        let grid = *self.grid();
        let n = grid.n();
        let pa: Vec<Vec<f64>> = self.terms[..=order].iter().map(|f| padded_values(f.values())).collect();
        let pb: Vec<Vec<f64>> = other.terms[..=order].iter().map(|f| padded_values(f.values())).collect();
        let m = pa[0].len();
        let terms = (0..=order)
            .map(|k| {
                let mut acc = vec![0.0; m];
                for i in 0..=k {
                    for ((s, a), b) in acc.iter_mut().zip(&pa[i]).zip(&pb[k - i]) {
                        *s += a * b;
                    }
                }
                Field::from_values(grid, unpadded_values(&acc, n)).expect("length preserved")
            })
            .collect();
        Jet { terms }
    }

    pub fn square(&self) -> Jet {
        self.mul_jet(self)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet { terms: self.terms.iter().zip(&rhs.terms).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet { terms: self.terms.iter().zip(&rhs.terms).map(|(a, b)| a - b).collect() }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul<&Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}

impl Jet {
    pub(crate) fn apply_table(&self, table: &[num_complex::Complex64]) -> Jet {
        self.map(|f| Multiplier::apply_table(table, f))
    }
}
