//! Ancilla circuits for non-demolition readout of concurrence, predictability
//! and visibility.
//!
//! System qubits are 0 and 1; ancillas follow. Two circuits are provided:
//!
//! * [`concurrence_circuit`]: x-rotations on both system qubits, parity copied
//!   onto a single ancilla by two CNOTs, rotations undone, ancilla measured.
//!   The ancilla outcome is the `σʸ⊗σʸ` eigenvalue class of the outgoing state.
//! * [`universal_circuit`]: three rotation settings around a prepared ancilla
//!   pair, each system qubit copied onto its own ancilla. The presets in
//!   [`CircuitMode`] select concurrence, predictability or visibility readout.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{BellCoefficients, BELL_KETS};
use crate::state::{
    apply_cnot, apply_pauli_string, apply_single, basis_state, expectation, measure, rotation_gate,
    OutcomeDistribution, Pauli, StateVector,
};
use crate::ABSENT_BRANCH;

pub const SYSTEM_QUBITS: usize = 2;

/// `σʸ⊗σʸ` on the system pair.
pub const CONCURRENCE_OBSERVABLE: [(usize, Pauli); 2] = [(0, Pauli::Y), (1, Pauli::Y)];

const X_QUARTER: [f64; 3] = [FRAC_PI_2, 0.0, 0.0];
const Y_QUARTER: [f64; 3] = [0.0, FRAC_PI_2, 0.0];
const NO_ROTATION: [f64; 3] = [0.0; 3];

fn neg(v: [f64; 3]) -> [f64; 3] {
    v.map(|x| -x)
}

/// One gate of a [`Circuit`]. Rotations are `exp(-i σ·θ / 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitOp {
    Rotation { target: usize, axis_angle: [f64; 3] },
    Cnot { control: usize, target: usize },
}

impl CircuitOp {
    fn max_qubit(&self) -> usize {
        match *self {
            CircuitOp::Rotation { target, .. } => target,
            CircuitOp::Cnot { control, target } => control.max(target),
        }
    }

    fn apply(&self, state: &StateVector) -> Result<StateVector> {
        match *self {
            CircuitOp::Rotation { target, axis_angle } => apply_single(state, &rotation_gate(axis_angle)?, target),
            CircuitOp::Cnot { control, target } => apply_cnot(state, control, target),
        }
    }
}

/// Rotation settings of the universal circuit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitMode {
    Concurrence,
    Predictability,
    Visibility,
    /// Pre-rotation of the system, post-rotation of the system, and ancilla
    /// preparation rotation.
    Custom { pre: [f64; 3], post: [f64; 3], ancilla: [f64; 3] },
}

impl CircuitMode {
    pub const PRESETS: [CircuitMode; 3] = [CircuitMode::Concurrence, CircuitMode::Predictability, CircuitMode::Visibility];

    /// `(pre, post, ancilla)` rotation vectors.
    ///
    /// Visibility pre-rotates by `-(π/2)ŷ` so that ancilla outcome `00` leaves
    /// the system in `|+>|+>` with `|±> = (|1> ± |0>)/√2`.
    pub fn angles(&self) -> ([f64; 3], [f64; 3], [f64; 3]) {
        match *self {
            CircuitMode::Concurrence => (X_QUARTER, neg(X_QUARTER), Y_QUARTER),
            CircuitMode::Predictability => (NO_ROTATION, NO_ROTATION, NO_ROTATION),
            CircuitMode::Visibility => (neg(Y_QUARTER), Y_QUARTER, NO_ROTATION),
            CircuitMode::Custom { pre, post, ancilla } => (pre, post, ancilla),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CircuitMode::Concurrence => "concurrence",
            CircuitMode::Predictability => "predictability",
            CircuitMode::Visibility => "visibility",
            CircuitMode::Custom { .. } => "custom",
        }
    }
}

/// Which circuit produced a set of outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    /// Single-ancilla parity circuit.
    Fig1,
    /// Two-ancilla universal circuit.
    Universal(CircuitMode),
}

impl Experiment {
    pub fn ancilla_count(&self) -> usize {
        match self {
            Experiment::Fig1 => 1,
            Experiment::Universal(_) => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Fig1 => "fig1",
            Experiment::Universal(mode) => mode.name(),
        }
    }

    /// Outcomes in the same class are indistinguishable to the non-demolition
    /// readout: concurrence readout through the universal circuit only
    /// protects ancilla parity, every other experiment its full bitstring.
    pub fn outcome_class(&self, bits: usize) -> usize {
        match self {
            Experiment::Universal(CircuitMode::Concurrence) => (bits.count_ones() & 1) as usize,
            _ => bits,
        }
    }
}

/// Ordered gate list on two system qubits plus ancillas, all ancillas measured.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    experiment: Experiment,
    n_ancilla: usize,
    ops: Vec<CircuitOp>,
    measured: Vec<usize>,
}

impl Circuit {
    pub fn new(experiment: Experiment, ops: Vec<CircuitOp>) -> Result<Self> {
        let n_ancilla = experiment.ancilla_count();
        let width = SYSTEM_QUBITS + n_ancilla;
        for op in &ops {
            if op.max_qubit() >= width {
                return Err(Error::CircuitQubit { qubit: op.max_qubit(), width });
            }
            if let CircuitOp::Cnot { control, target } = *op {
                if control == target {
                    return Err(Error::SameQubit(control));
                }
            }
        }
        Ok(Circuit { experiment, n_ancilla, ops, measured: (SYSTEM_QUBITS..width).collect() })
    }

    pub fn experiment(&self) -> Experiment {
        self.experiment
    }

    pub fn n_system(&self) -> usize {
        SYSTEM_QUBITS
    }

    pub fn n_ancilla(&self) -> usize {
        self.n_ancilla
    }

    pub fn width(&self) -> usize {
        SYSTEM_QUBITS + self.n_ancilla
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    /// `input ⊗ |0…0>` after the first `steps` ops.
    pub fn evolve(&self, input: &StateVector, steps: usize) -> Result<StateVector> {
        if input.n_qubits() != SYSTEM_QUBITS {
            return Err(Error::NotTwoQubit(input.n_qubits()));
        }
        let ancillas = basis_state(self.n_ancilla, 0)?;
        self.ops
            .iter()
            .take(steps)
            .try_fold(input.tensor(&ancillas)?, |state, op| op.apply(&state))
    }

    /// Composite state right before the ancillas are read out.
    pub fn pre_measurement_state(&self, input: &StateVector) -> Result<StateVector> {
        self.evolve(input, self.ops.len())
    }
}

/// Single-ancilla concurrence readout.
pub fn concurrence_circuit() -> Circuit {
    use CircuitOp::*;
    let ops = vec![
        Rotation { target: 0, axis_angle: X_QUARTER },
        Rotation { target: 1, axis_angle: X_QUARTER },
        Cnot { control: 0, target: 2 },
        Cnot { control: 1, target: 2 },
        Rotation { target: 0, axis_angle: neg(X_QUARTER) },
        Rotation { target: 1, axis_angle: neg(X_QUARTER) },
    ];
    Circuit::new(Experiment::Fig1, ops).expect("fixed layout is valid")
}

/// Two-ancilla circuit with rotation settings from `mode`.
pub fn universal_circuit(mode: CircuitMode) -> Circuit {
    use CircuitOp::*;
    let (pre, post, ancilla) = mode.angles();
    let ops = vec![
        Rotation { target: 0, axis_angle: pre },
        Rotation { target: 1, axis_angle: pre },
        Rotation { target: 2, axis_angle: ancilla },
        Cnot { control: 2, target: 3 },
        Cnot { control: 0, target: 2 },
        Cnot { control: 1, target: 3 },
        Rotation { target: 0, axis_angle: post },
        Rotation { target: 1, axis_angle: post },
    ];
    Circuit::new(Experiment::Universal(mode), ops).expect("fixed layout is valid")
}

/// One ancilla readout and the system state it leaves behind.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub bits: usize,
    pub probability: f64,
    pub system_state: StateVector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub experiment: Experiment,
    /// Distribution over the ancilla bits, with composite post-measurement states.
    pub distribution: OutcomeDistribution,
    /// Same outcomes with the ancillas projected out.
    pub branches: Vec<Branch>,
}

impl RunResult {
    pub fn probability(&self, bits: usize) -> f64 {
        self.distribution.probability(bits)
    }

    pub fn branch(&self, bits: usize) -> Option<&Branch> {
        self.branches.iter().find(|b| b.bits == bits)
    }
}

/// Runs `circuit` on `input` and measures the ancillas exactly.
pub fn run_exact(circuit: &Circuit, input: &StateVector) -> Result<RunResult> {
    let composite = circuit.pre_measurement_state(input)?;
    let distribution = measure(&composite, circuit.measured())?;
    let n_anc = circuit.n_ancilla;
    let branches = distribution
        .entries
        .iter()
        .map(|outcome| {
            let amps = outcome.post_state.amplitudes();
            let system: Vec<Complex64> = (0..1usize << SYSTEM_QUBITS).map(|s| amps[s << n_anc | outcome.bits]).collect();
            Ok(Branch {
                bits: outcome.bits,
                probability: outcome.probability,
                system_state: StateVector::normalized(system)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(RunResult { experiment: circuit.experiment, distribution, branches })
}

/// Post-measurement system states of the concurrence circuit, from the
/// closed form in Bell coefficients. A branch with vanishing weight is `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalStates {
    /// Ancilla read as 1: `(α|ψ⁻> + η|φ⁺>)/√(α²+η²)`.
    pub on_one: Option<StateVector>,
    /// Ancilla read as 0: `(γ|φ⁻> + β|ψ⁺>)/√(β²+γ²)`.
    pub on_zero: Option<StateVector>,
}

pub fn conditional_states(c: &BellCoefficients) -> Result<ConditionalStates> {
    let branch = |weights: [f64; 4]| -> Result<Option<StateVector>> {
        let norm2: f64 = weights.iter().map(|w| w * w).sum();
        if norm2 < ABSENT_BRANCH {
            return Ok(None);
        }
        let scale = norm2.sqrt().recip();
        let amps: Vec<f64> = (0..4)
            .map(|i| BELL_KETS.iter().zip(&weights).map(|(ket, w)| ket[i] * w * scale).sum())
            .collect();
        StateVector::from_real(&amps).map(Some)
    };
    BellCoefficients::from_array(c.to_array())?;
    Ok(ConditionalStates {
        on_one: branch([c.alpha, 0.0, 0.0, c.eta])?,
        on_zero: branch([0.0, c.beta, c.gamma, 0.0])?,
    })
}

/// Worst-case probability, over the outcome branches of one run, that rerunning
/// the circuit on the outgoing system state lands in the same outcome class.
pub fn circuit_repeatability(circuit: &Circuit, input: &StateVector) -> Result<f64> {
    let experiment = circuit.experiment;
    let first = run_exact(circuit, input)?;
    first.branches.iter().try_fold(1.0f64, |worst, branch| {
        let class = experiment.outcome_class(branch.bits);
        let again = run_exact(circuit, &branch.system_state)?;
        let same: f64 = again
            .branches
            .iter()
            .filter(|b| experiment.outcome_class(b.bits) == class)
            .map(|b| b.probability)
            .sum();
        Ok(worst.min(same))
    })
}

/// [`circuit_repeatability`] of the universal circuit in `mode`; 1 for a
/// non-demolition readout.
pub fn qnd_repeatability(mode: CircuitMode, input: &StateVector) -> Result<f64> {
    circuit_repeatability(&universal_circuit(mode), input)
}

/// `‖O|ψ> - <O>|ψ>‖`; zero exactly when `state` is an eigenvector of `O`.
pub fn eigenstate_check(observable: &[(usize, Pauli)], state: &StateVector) -> Result<f64> {
    let mean = expectation(state, observable)?;
    let image = apply_pauli_string(state, observable)?;
    Ok(image
        .iter()
        .zip(state.amplitudes())
        .map(|(o, a)| (o - a * mean).norm_sqr())
        .sum::<f64>()
        .sqrt())
}
