//! Minimal dense state-vector engine.
//!
//! Registers are small (at most [`MAX_QUBITS`] wires) and always stored
//! normalized. Gate methods return a fresh [`StateVector`]; the `_in_place`
//! variants mutate through `&mut self`.

mod density;
mod state;
mod unitary;

pub use density::DensityMatrix;
pub use state::{Measurement, OutcomeSource, StateVector};
pub use unitary::{make_rotation, Unitary2x2};

/// Largest register the engine will allocate.
pub const MAX_QUBITS: usize = 16;

/// Tolerance for state-level identities (norms, traces, Hermiticity).
pub const NORM_TOL: f64 = 1e-10;

/// Tolerance for 2×2 matrix identities.
pub const MATRIX_TOL: f64 = 1e-12;

/// Branches whose Born weight falls below this are treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-15;
