//! Dense state-vector and density-matrix simulation.
//!
//! Qubit 0 is the least-significant bit of every basis-state index.

mod density;
mod matrix;
mod rng;
mod state;

pub use density::{
    density_from_ensemble, distance_trace, DensityMatrix, DENSITY_TOL, POSITIVITY_TOL,
};
pub use matrix::{CMatrix, UnitaryMatrix};
pub use rng::{derive_seed, mix64, SeededRng};
pub use state::{StateVector, NORM_TOL};

/// Default equality tolerance for matrix and state comparisons.
pub const EQ_TOL: f64 = 1e-10;
