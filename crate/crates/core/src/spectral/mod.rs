//! Periodic grids, real fields, Fourier multipliers and Sobolev norms.

mod fft;
mod field;
mod grid;
pub mod io;
mod multiplier;
mod norm;

pub use field::Field;
pub use grid::Grid;
pub use multiplier::{apply, builtin_symbol, longwave_truncation, Builtin, Multiplier, Parity, Truncated};
pub use norm::{sobolev_norm, SobolevIndex};

pub(crate) use fft::{padded_values, unpadded_values};

/// Free-function form of [`Grid::new`].
pub fn make_grid(n: usize, length: f64, origin: f64) -> crate::Result<Grid> {
    Grid::new(n, length, origin)
}

/// Maximum over a 50x50 lattice in `[-3,3]^2`, `l != k`, of the defect in
/// `(tanh l - tanh k)/tanh(l-k) = 1 - tanh k tanh l`.
pub fn trig_identity_defect() -> f64 {
    let m = 50;
    let node = |i: usize| -3.0 + 6.0 * i as f64 / (m - 1) as f64;
    let mut worst = 0.0_f64;
    for a in 0..m {
        for b in 0..m {
            let (l, k) = (node(a), node(b));
            if (l - k).abs() < 1e-9 {
                continue;
            }
            let lhs = (l.tanh() - k.tanh()) / (l - k).tanh();
            let rhs = 1.0 - k.tanh() * l.tanh();
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}
