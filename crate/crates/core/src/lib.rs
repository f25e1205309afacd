//! Quantum correlations of axially symmetric spin-(1/2, S) systems.
//!
//! States and Hamiltonians that commute with the total `S_z` have a sparse
//! "A" shape: two isolated diagonal entries plus `2S` independent 2x2
//! blocks. This crate diagonalizes such states in closed form and evaluates
//! local quantum uncertainty (LQU) and local quantum Fisher information
//! (LQFI) from the resulting eigenvalues, with dense reference routes kept
//! alongside for cross-checking.

pub mod aform;
pub mod asymptotics;
pub mod correlations;
pub mod error;
pub mod linalg;
pub mod model;
pub mod spectral;
pub mod spin;
pub mod sweep;
pub mod thermal;

pub use aform::{validate_a_form, validate_a_state, AHamiltonian, AState};
pub use correlations::{correlations, lqfi, lqu, ActiveBranch, CorrelationResult, Measure, Method};
pub use error::{Error, Result};
pub use model::{build_model_hamiltonian, ModelParams};
pub use spectral::{diagonalize, SpectralForm};
pub use spin::SpinLength;
pub use sweep::{detect_transitions, emit_csv, parse_config, run_sweep, MeasureKind, SweepConfig};
pub use thermal::{gibbs_state, ground_state, Temperature};
