//! Finite-volume solver for the one-dimensional Euler equations with planar,
//! cylindrical or spherical symmetry.
//!
//! The planar part of the system is advanced with a MUSCL-Hancock scheme
//! (primitive-variable reconstruction, superbee limiter, Roe flux with a
//! Harten entropy fix). The geometric source term is split off and
//! integrated with Heun's method. The exact planar Riemann solver in
//! [`riemann::exact`] is provided for verification.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod gas;
pub mod reconstruction;
pub mod riemann;
pub mod scenario;
pub mod snapshot;
pub mod solver;
pub mod source;

pub use error::{Error, Result};
pub use gas::{ConservedState, Flux, GasModel, Geometry, PrimitiveState, RadialGrid};
pub use reconstruction::LimiterKind;
pub use scenario::{build_initial_condition, parse_config, serialize_config, DiaphragmSpec};
pub use snapshot::{write_snapshot_csv, Snapshot};
pub use solver::{
    detect_convergence, run_simulation, Boundaries, Boundary, ConvergenceEvent, Simulation,
    SimulationConfig, SimulationState, Solver, Splitting,
};
