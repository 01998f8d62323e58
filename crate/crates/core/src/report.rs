//! JSON report schema shared by the `qnd` subcommands.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuits::{CircuitMode, Experiment, RunResult};
use crate::error::Result;
use crate::harness::{
    ancilla_imbalances, concurrence_from_classes, concurrence_from_parity, CountsRecord, EstimateWithError, Frequencies,
};
use crate::observables::{BellCoefficients, ComplementarityReport};
use crate::state::bit_label;

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<C, R> {
    pub schema_version: u32,
    pub config_echo: C,
    pub results: R,
}

impl<C, R> Report<C, R> {
    pub fn new(config_echo: C, results: R) -> Self {
        Report { schema_version: SCHEMA_VERSION, config_echo, results }
    }
}

/// Amplitudes as `[re, im]` pairs.
pub fn amplitude_pairs(amplitudes: &[Complex64]) -> Vec<[f64; 2]> {
    amplitudes.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub amplitudes: Vec<[f64; 2]>,
    pub rebit: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bell: Option<BellCoefficients>,
    pub observables: ComplementarityReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactOutcome {
    pub bits: String,
    pub probability: f64,
    pub post_state: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub experiment: Experiment,
    pub ancilla_qubits: Vec<usize>,
    pub exact: Vec<ExactOutcome>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counts: Option<CountsRecord>,
    /// Estimator values, from `counts` when present and from the exact
    /// probabilities otherwise. Absent for inputs that are not real up to phase.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub estimates: Option<BTreeMap<String, EstimateWithError>>,
}

impl ExperimentReport {
    pub fn from_run(run: &RunResult, measured: &[usize]) -> Self {
        let width = run.experiment.ancilla_count();
        let exact = run
            .branches
            .iter()
            .map(|b| ExactOutcome {
                bits: bit_label(b.bits, width),
                probability: b.probability,
                post_state: amplitude_pairs(b.system_state.amplitudes()),
            })
            .collect();
        ExperimentReport {
            name: run.experiment.name().to_string(),
            experiment: run.experiment,
            ancilla_qubits: measured.to_vec(),
            exact,
            counts: None,
            estimates: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateResults {
    pub input: InputSummary,
    pub experiments: Vec<ExperimentReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reconstruction: Option<ComplementarityReport>,
}

/// Named estimates an experiment supports, from its outcome frequencies.
pub fn estimates_for(experiment: Experiment, f: &Frequencies) -> Result<BTreeMap<String, EstimateWithError>> {
    let mut out = BTreeMap::new();
    match experiment {
        Experiment::Fig1 => {
            out.insert("concurrence".into(), concurrence_from_parity(f)?);
        }
        Experiment::Universal(CircuitMode::Concurrence) => {
            out.insert("concurrence".into(), concurrence_from_classes(f)?);
        }
        Experiment::Universal(CircuitMode::Predictability) => {
            let (p1, p2) = ancilla_imbalances(f)?;
            out.insert("predictability_1".into(), p1);
            out.insert("predictability_2".into(), p2);
        }
        Experiment::Universal(CircuitMode::Visibility) => {
            let (v1, v2) = ancilla_imbalances(f)?;
            out.insert("visibility_1".into(), v1);
            out.insert("visibility_2".into(), v2);
        }
        Experiment::Universal(CircuitMode::Custom { .. }) => {
            let (a, b) = ancilla_imbalances(f)?;
            out.insert("ancilla_1_imbalance".into(), a);
            out.insert("ancilla_2_imbalance".into(), b);
            out.insert("class_imbalance".into(), concurrence_from_classes(f)?);
        }
    }
    Ok(out)
}
