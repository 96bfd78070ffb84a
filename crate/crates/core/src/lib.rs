//! Pseudospectral tools for the corrected KdV approximation of long water waves.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`]: periodic grids, real fields, Fourier multipliers and Sobolev norms.
//! * [`modulation`]: the KdV, linearized KdV, transport and W3 wave equations in the
//!   slow variables, plus an orchestrator that advances all of them together.
//! * [`approximant`]: the physical-space approximants and the initial-data map.
//! * [`residual`]: residuals of the truncated water-wave system and slope fits.
//! * [`ww`]: a direct stepper for the truncated water-wave system.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approximant;
pub mod error;
pub mod modulation;
pub mod residual;
pub mod spectral;
pub mod ww;

pub use error::{Error, Result};
