//! Exact pure-state simulation of ancilla-based non-demolition measurements
//! on a pair of qubits.
//!
//! The crate is layered bottom-up:
//!
//! * [`state`] holds a dense statevector with single-qubit rotations, CNOTs,
//!   Pauli expectation values and Born-rule projective measurement.
//! * [`observables`] evaluates concurrence, visibility, predictability and the
//!   complementarity identities, either from amplitudes or from real Bell-basis
//!   coefficients.
//! * [`circuits`] builds the single-ancilla parity circuit and the two-ancilla
//!   universal circuit with its presets, runs them exactly and checks the
//!   non-demolition properties of the outgoing states.
//! * [`harness`] samples finite-shot ancilla statistics with counter-based
//!   randomness and maps counts back to estimates with standard errors.
//! * [`cli`] is the `qnd` command-line front end.
//!
//! Qubit 0 is the leftmost label in a ket and the most significant bit of a
//! basis index, so `|q0 q1 ...>` has index `sum q_i * 2^(n-1-i)`.

pub mod circuits;
pub mod cli;
pub mod error;
pub mod harness;
pub mod observables;
pub mod random;
pub mod report;
pub mod state;

pub use circuits::{
    concurrence_circuit, conditional_states, eigenstate_check, qnd_repeatability,
    run_exact, universal_circuit, Circuit, CircuitMode, CircuitOp, ConditionalStates,
    Experiment, RunResult,
};
pub use error::{Error, Result};
pub use num_complex;
pub use harness::{
    estimate_concurrence_parity, estimate_concurrence_universal, estimate_predictabilities,
    estimate_visibilities, reconstruct_complementarity, sample, sample_sharded, CountsRecord,
    EstimateWithError, Frequencies,
};
pub use observables::{
    bell_from_computational, computational_from_bell, concurrence_pure, observables_from_bell,
    observables_of_state, predictability, single_partitedness, triality_residual,
    variance_sum, visibility, BellCoefficients, ComplementarityReport, Particle,
};
pub use state::{
    apply_cnot, apply_single, basis_state, expectation, measure, rotation_gate, Operator2,
    OutcomeDistribution, Pauli, SingleQubitGate, StateVector,
};

/// Tolerance for unitarity and probability-sum checks.
pub const UNITARITY_TOL: f64 = 1e-12;
/// Tolerance on the squared norm of a statevector.
pub const NORM_TOL: f64 = 1e-10;
/// Largest imaginary residue accepted on a real-valued quantity.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest imaginary part tolerated on Bell coefficients once the global
/// phase has been removed.
pub const REBIT_TOL: f64 = 1e-9;
/// Outcomes with probability below this are treated as absent.
pub const ABSENT_BRANCH: f64 = 1e-14;
/// Largest register handled by [`StateVector`].
pub const MAX_QUBITS: usize = 8;
