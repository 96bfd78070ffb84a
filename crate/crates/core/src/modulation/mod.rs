//! The modulation hierarchy in the slow variables.
//!
//! Standalone solvers cover each equation separately (KdV and linearized KdV in
//! `T`, transport and `W3` in `tau`); [`Hierarchy`] advances all of them together.

pub mod formulas;
mod hierarchy;
mod jet;
mod kdv;
mod linkdv;
pub mod persist;
mod state;
mod stepper;
mod system;
mod trajectory;
mod transport;
mod w3;

pub use hierarchy::Hierarchy;
pub use jet::Jet;
pub use kdv::{
    dtt_closed_form, is_resolved, kdv_evolve, kdv_evolve_strided, kdv_rhs, soliton, soliton_speed, Chirality,
};
pub use linkdv::{j_driving, linkdv_evolve, linkdv_evolve_with, linkdv_rhs};
pub use state::{ModulationState, MonitoredNorms};
pub use stepper::IfRk4;
pub use system::{Components, Fluxes, LabSystem, ModelLevel, COMPONENT_NAMES};
pub use trajectory::Trajectory;
pub use transport::{transport_evolve, transport_evolve_strided, TransportSlice, TransportSolution};
pub use w3::{w3_evolve, w3_source_field, Backgrounds, W3Slice};
