//! Simulation and analysis of rotation teleportation through a shared GHZ
//! state, and of the receiver-encoded secret-sharing scheme built on it.
//!
//! Register layout is fixed: wire 0 is Alice's message qubit `a`, wire 1 is
//! her GHZ qubit `b`, and wires `2..n+2` belong to receivers `0..n`.

pub mod analysis;
pub mod error;
pub mod parties;
pub mod protocol;
pub mod qsim;

pub use num_complex::Complex64;

pub use analysis::{AngleDistributionSpec, AverageSpec, BlochState, FidelityStats};
pub use error::{Error, Result};
pub use parties::{ClassicalMessage, PartyId, Payload, Transcript};
pub use protocol::{Branch, Mode, RecoveryPlan, ScenarioConfig};
pub use qsim::{DensityMatrix, OutcomeSource, StateVector, Unitary2x2};
