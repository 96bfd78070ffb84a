//! Physical-space approximants on the alpha-grid and the laboratory initial-data map.

mod frame;
mod initial;

pub use frame::{
    assemble_frame, assemble_frame_with_derivatives, deltas, psi_u_crosscheck, time_derivative_closure,
    ApproximantFrame, Fidelity, FrameDerivatives,
};
pub use initial::{split_initial_data, InitialConvention, InitialDataMap};
