//! Finite-shot sampling of ancilla readouts and the estimators that turn
//! outcome frequencies back into concurrence, predictability and visibility.
//!
//! Shot `i` of a run seeded with `s` takes its uniform variate from the
//! 64-bit word at position `i` of the ChaCha8 keystream keyed by `s`. The
//! keystream is seekable, so a shard covering shots `a..b` jumps straight to
//! word `a` and the aggregate counts do not depend on how shots are split
//! between workers. Variates map to outcomes by inverse CDF over the exact
//! outcome distribution in increasing bit order.
//!
//! Standard errors are one-sigma binomial cell errors `√(f(1-f)/N)` summed
//! linearly through each signed combination of frequencies. Estimates are
//! absolute values and therefore biased upward near zero; this is not corrected.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{run_exact, Circuit, CircuitMode, Experiment, RunResult};
use crate::error::{Error, Result};
use crate::observables::ComplementarityReport;
use crate::observables::ReportErrors;
use crate::state::{bit_label, parse_bit_label, StateVector};

/// Shots per shard used by [`sample`].
pub const DEFAULT_SHARD_SIZE: u64 = 1 << 16;

/// Ancilla outcome counts from a sampled experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountsRecord {
    pub experiment: Experiment,
    pub shots: u64,
    pub seed: u64,
    /// Bitstring (first ancilla leftmost) to count. Unobserved outcomes may be absent.
    pub counts: BTreeMap<String, u64>,
}

impl CountsRecord {
    /// Builds a record whose shot total is the sum of `counts`.
    pub fn from_counts<'a>(
        experiment: Experiment,
        seed: u64,
        counts: impl IntoIterator<Item = (&'a str, u64)>,
    ) -> Result<Self> {
        let counts: BTreeMap<String, u64> = counts.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let record = CountsRecord { experiment, shots: counts.values().sum(), seed, counts };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::NoShots);
        }
        let width = self.experiment.ancilla_count();
        for label in self.counts.keys() {
            parse_bit_label(label)?;
            if label.len() != width {
                return Err(Error::OutcomeArity { expected: width, found: label.len() });
            }
        }
        let sum: u64 = self.counts.values().sum();
        if sum != self.shots {
            return Err(Error::ShotMismatch { sum, shots: self.shots });
        }
        Ok(())
    }

    pub fn count(&self, bits: usize) -> u64 {
        let label = bit_label(bits, self.experiment.ancilla_count());
        self.counts.get(&label).copied().unwrap_or(0)
    }

    pub fn frequencies(&self) -> Result<Frequencies> {
        self.validate()?;
        let width = self.experiment.ancilla_count();
        let n = self.shots as f64;
        let values = (0..1usize << width).map(|bits| self.count(bits) as f64 / n).collect();
        Ok(Frequencies { width, values, shots: Some(self.shots) })
    }
}

/// Outcome frequencies indexed by ancilla bits. `shots` is `None` for exact
/// probabilities, which carry no sampling error.
#[derive(Clone, Debug, PartialEq)]
pub struct Frequencies {
    pub width: usize,
    pub values: Vec<f64>,
    pub shots: Option<u64>,
}

impl Frequencies {
    pub fn exact(result: &RunResult) -> Self {
        let width = result.experiment.ancilla_count();
        let values = (0..1usize << width).map(|bits| result.probability(bits)).collect();
        Frequencies { width, values, shots: None }
    }

    fn require_width(&self, width: usize) -> Result<()> {
        if self.width != width || self.values.len() != 1 << width {
            return Err(Error::OutcomeArity { expected: width, found: self.width });
        }
        Ok(())
    }

    fn cell_error(&self, bits: usize) -> f64 {
        match self.shots {
            Some(n) => {
                let f = self.values[bits];
                (f * (1.0 - f) / n as f64).max(0.0).sqrt()
            }
            None => 0.0,
        }
    }

    /// `|Σ sign(bits)·f(bits)|` with its linearly propagated error.
    fn signed_sum(&self, sign: impl Fn(usize) -> f64) -> EstimateWithError {
        let (value, std_error) = (0..self.values.len()).fold((0.0, 0.0), |(v, e), bits| {
            let s = sign(bits);
            (v + s * self.values[bits], e + s.abs() * self.cell_error(bits))
        });
        EstimateWithError { value: value.abs(), std_error }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithError {
    pub value: f64,
    pub std_error: f64,
}

fn bit_sign(bits: usize, shift: usize) -> f64 {
    if bits >> shift & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `|p₁ - p₀|` of the single-ancilla circuit.
pub fn concurrence_from_parity(f: &Frequencies) -> Result<EstimateWithError> {
    f.require_width(1)?;
    Ok(f.signed_sum(|bits| bit_sign(bits, 0)))
}

/// `|(p₀₁ + p₁₀) - (p₀₀ + p₁₁)|` of the universal circuit.
pub fn concurrence_from_classes(f: &Frequencies) -> Result<EstimateWithError> {
    f.require_width(2)?;
    Ok(f.signed_sum(|bits| if bits.count_ones() % 2 == 0 { 1.0 } else { -1.0 }))
}

/// Imbalance of the first and of the second ancilla bit,
/// `(|(p₀₀+p₀₁) - (p₁₀+p₁₁)|, |(p₀₀+p₁₀) - (p₀₁+p₁₁)|)`.
pub fn ancilla_imbalances(f: &Frequencies) -> Result<(EstimateWithError, EstimateWithError)> {
    f.require_width(2)?;
    Ok((f.signed_sum(|bits| bit_sign(bits, 1)), f.signed_sum(|bits| bit_sign(bits, 0))))
}

fn expect_experiment(record: &CountsRecord, accepted: &[Experiment], expected: &str) -> Result<()> {
    let ok = accepted.contains(&record.experiment)
        || matches!(record.experiment, Experiment::Universal(CircuitMode::Custom { .. }));
    if !ok {
        return Err(Error::ModeMismatch { expected: expected.into(), found: record.experiment.name().into() });
    }
    Ok(())
}

fn check_arity(record: &CountsRecord, width: usize) -> Result<()> {
    let found = record.experiment.ancilla_count();
    if found != width {
        return Err(Error::OutcomeArity { expected: width, found });
    }
    Ok(())
}

pub fn estimate_concurrence_parity(counts: &CountsRecord) -> Result<EstimateWithError> {
    check_arity(counts, 1)?;
    concurrence_from_parity(&counts.frequencies()?)
}

pub fn estimate_concurrence_universal(counts: &CountsRecord) -> Result<EstimateWithError> {
    check_arity(counts, 2)?;
    expect_experiment(counts, &[Experiment::Universal(CircuitMode::Concurrence)], "concurrence")?;
    concurrence_from_classes(&counts.frequencies()?)
}

/// Concurrence from either circuit.
pub fn estimate_concurrence(counts: &CountsRecord) -> Result<EstimateWithError> {
    match counts.experiment {
        Experiment::Fig1 => estimate_concurrence_parity(counts),
        _ => estimate_concurrence_universal(counts),
    }
}

/// `(P₁, P₂)` from predictability-mode counts.
pub fn estimate_predictabilities(counts: &CountsRecord) -> Result<(EstimateWithError, EstimateWithError)> {
    check_arity(counts, 2)?;
    expect_experiment(counts, &[Experiment::Universal(CircuitMode::Predictability)], "predictability")?;
    ancilla_imbalances(&counts.frequencies()?)
}

/// `(V₁, V₂)` from visibility-mode counts.
pub fn estimate_visibilities(counts: &CountsRecord) -> Result<(EstimateWithError, EstimateWithError)> {
    check_arity(counts, 2)?;
    expect_experiment(counts, &[Experiment::Universal(CircuitMode::Visibility)], "visibility")?;
    ancilla_imbalances(&counts.frequencies()?)
}

fn assemble(
    c: EstimateWithError,
    p: (EstimateWithError, EstimateWithError),
    v: (EstimateWithError, EstimateWithError),
) -> ComplementarityReport {
    let mut report = ComplementarityReport::from_parts(c.value, [v.0.value, v.1.value], [p.0.value, p.1.value]);
    let ds = |v: EstimateWithError, p: EstimateWithError| 2.0 * (v.value * v.std_error + p.value * p.std_error);
    let (ds1, ds2) = (ds(v.0, p.0), ds(v.1, p.1));
    let dc2 = 2.0 * c.value * c.std_error;
    report.standard_errors = Some(ReportErrors {
        concurrence: c.std_error,
        visibility_1: v.0.std_error,
        predictability_1: p.0.std_error,
        visibility_2: v.1.std_error,
        predictability_2: p.1.std_error,
        single_partitedness_1: ds1,
        single_partitedness_2: ds2,
        triality_residual_1: dc2 + ds1,
        triality_residual_2: dc2 + ds2,
    });
    report
}

/// Complementarity report from the three readout experiments on one input.
/// The concurrence record may come from either circuit.
pub fn reconstruct_complementarity(
    c_counts: &CountsRecord,
    p_counts: &CountsRecord,
    v_counts: &CountsRecord,
) -> Result<ComplementarityReport> {
    let strict = |record: &CountsRecord, mode: CircuitMode| -> Result<()> {
        if record.experiment != Experiment::Universal(mode) {
            return Err(Error::ModeMismatch { expected: mode.name().into(), found: record.experiment.name().into() });
        }
        Ok(())
    };
    if c_counts.experiment != Experiment::Fig1 {
        strict(c_counts, CircuitMode::Concurrence)?;
    }
    strict(p_counts, CircuitMode::Predictability)?;
    strict(v_counts, CircuitMode::Visibility)?;
    Ok(assemble(
        estimate_concurrence(c_counts)?,
        estimate_predictabilities(p_counts)?,
        estimate_visibilities(v_counts)?,
    ))
}

/// Same as [`reconstruct_complementarity`] from exact (infinite-shot) runs.
pub fn reconstruct_from_exact(concurrence: &RunResult, predictability: &RunResult, visibility: &RunResult) -> Result<ComplementarityReport> {
    let c = match concurrence.experiment {
        Experiment::Fig1 => concurrence_from_parity(&Frequencies::exact(concurrence))?,
        _ => concurrence_from_classes(&Frequencies::exact(concurrence))?,
    };
    Ok(assemble(
        c,
        ancilla_imbalances(&Frequencies::exact(predictability))?,
        ancilla_imbalances(&Frequencies::exact(visibility))?,
    ))
}

fn unit_interval(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn sample_shard(cdf: &[f64], seed: u64, start: u64, len: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(start) * 2);
    let mut counts = vec![0u64; cdf.len()];
    for _ in 0..len {
        let u = unit_interval(rng.next_u64());
        let slot = cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1);
        counts[slot] += 1;
    }
    counts
}

/// Samples `shots` ancilla readouts split across `shards` workers. The result
/// is identical for every shard count.
pub fn sample_sharded(circuit: &Circuit, input: &StateVector, shots: u64, seed: u64, shards: u64) -> Result<CountsRecord> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let exact = run_exact(circuit, input)?;
    let entries = &exact.distribution.entries;
    let mut cdf: Vec<f64> = entries
        .iter()
        .scan(0.0, |acc, o| {
            *acc += o.probability;
            Some(*acc)
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = f64::INFINITY;
    }

    let shards = shards.clamp(1, shots);
    let per_shard = shots.div_ceil(shards);
    let totals = (0..shards)
        .into_par_iter()
        .map(|k| {
            let start = k * per_shard;
            let len = per_shard.min(shots.saturating_sub(start));
            sample_shard(&cdf, seed, start, len)
        })
        .reduce(
            || vec![0u64; cdf.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let width = circuit.n_ancilla();
    let counts = entries
        .iter()
        .zip(totals)
        .filter(|(_, n)| *n > 0)
        .map(|(o, n)| (bit_label(o.bits, width), n))
        .collect();
    Ok(CountsRecord { experiment: circuit.experiment(), shots, seed, counts })
}

/// Independent seed for the `stream`-th experiment of a batch keyed by `seed`
/// (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Samples `shots` ancilla readouts of `circuit` run on `input`.
pub fn sample(circuit: &Circuit, input: &StateVector, shots: u64, seed: u64) -> Result<CountsRecord> {
    sample_sharded(circuit, input, shots, seed, shots.div_ceil(DEFAULT_SHARD_SIZE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{concurrence_circuit, universal_circuit};
    use crate::observables::{computational_from_bell, BellCoefficients, BELL_KETS};
    use crate::state::basis_state;

    const CONC: Experiment = Experiment::Universal(CircuitMode::Concurrence);
    const PRED: Experiment = Experiment::Universal(CircuitMode::Predictability);
    const VIS: Experiment = Experiment::Universal(CircuitMode::Visibility);

    fn rec(experiment: Experiment, counts: &[(&str, u64)]) -> CountsRecord {
        CountsRecord::from_counts(experiment, 0, counts.iter().copied()).unwrap()
    }

    #[test]
    fn sample_deterministic_outcome() {
        let psi_minus = StateVector::from_real(&BELL_KETS[0]).unwrap();
        let r = sample(&concurrence_circuit(), &psi_minus, 1000, 3).unwrap();
        assert_eq!(r.counts, BTreeMap::from([("1".to_string(), 1000)]));
        assert_eq!(r.shots, 1000);
    }

    #[test]
    fn sample_balanced_outcome_converges() {
        let s00 = basis_state(2, 0).unwrap();
        let r = sample(&concurrence_circuit(), &s00, 200_000, 5).unwrap();
        assert_eq!(r.count(0) + r.count(1), 200_000);
        let f1 = r.count(1) as f64 / 200_000.0;
        // five sigma of a fair coin at this size
        assert!((f1 - 0.5).abs() < 5.0 * (0.25f64 / 200_000.0).sqrt());
    }

    #[test]
    fn sample_is_reproducible_and_shard_independent() {
        let input = computational_from_bell(&BellCoefficients::new(0.8, 0.6, 0.0, 0.0).unwrap()).unwrap();
        let circuit = universal_circuit(CircuitMode::Predictability);
        let a = sample_sharded(&circuit, &input, 10_001, 99, 1).unwrap();
        assert_eq!(a, sample_sharded(&circuit, &input, 10_001, 99, 1).unwrap());
        for shards in [2, 3, 7, 64, 10_001, 50_000] {
            assert_eq!(a, sample_sharded(&circuit, &input, 10_001, 99, shards).unwrap(), "{shards} shards");
        }
        assert_ne!(a, sample_sharded(&circuit, &input, 10_001, 100, 1).unwrap());
    }

    #[test]
    fn sample_rejects_zero_shots() {
        let s00 = basis_state(2, 0).unwrap();
        assert_eq!(sample(&concurrence_circuit(), &s00, 0, 0), Err(Error::NoShots));
    }

    #[test]
    fn parity_concurrence_examples() {
        let e = estimate_concurrence_parity(&rec(Experiment::Fig1, &[("1", 640), ("0", 360)])).unwrap();
        assert!((e.value - 0.28).abs() < 1e-15);
        // 2·√(0.64·0.36/1000)
        assert!((e.std_error - 2.0 * (0.64f64 * 0.36 / 1000.0).sqrt()).abs() < 1e-15);
        assert_eq!(estimate_concurrence_parity(&rec(Experiment::Fig1, &[("1", 500), ("0", 500)])).unwrap().value, 0.0);
        let e = estimate_concurrence_parity(&rec(Experiment::Fig1, &[("1", 1000)])).unwrap();
        assert_eq!((e.value, e.std_error), (1.0, 0.0));
        assert!(matches!(
            estimate_concurrence_parity(&rec(CONC, &[("00", 1)])),
            Err(Error::OutcomeArity { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn universal_concurrence_examples() {
        assert_eq!(estimate_concurrence_universal(&rec(CONC, &[("00", 500), ("11", 500)])).unwrap().value, 1.0);
        let e = estimate_concurrence_universal(&rec(CONC, &[("00", 180), ("11", 180), ("01", 320), ("10", 320)])).unwrap();
        assert!((e.value - 0.28).abs() < 1e-15);
        let e = estimate_concurrence_universal(&rec(CONC, &[("00", 250), ("11", 250), ("01", 250), ("10", 250)])).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(matches!(
            estimate_concurrence_universal(&rec(Experiment::Fig1, &[("0", 1)])),
            Err(Error::OutcomeArity { expected: 2, found: 1 })
        ));
        assert!(matches!(
            estimate_concurrence_universal(&rec(VIS, &[("00", 1)])),
            Err(Error::ModeMismatch { .. })
        ));
    }

    #[test]
    fn predictability_examples() {
        let (p1, p2) = estimate_predictabilities(&rec(PRED, &[("10", 500), ("11", 500)])).unwrap();
        assert_eq!((p1.value, p2.value), (1.0, 0.0));
        let (p1, p2) = estimate_predictabilities(&rec(PRED, &[("00", 250), ("01", 250), ("10", 250), ("11", 250)])).unwrap();
        assert_eq!((p1.value, p2.value), (0.0, 0.0));
        let (p1, p2) = estimate_predictabilities(&rec(PRED, &[("00", 1000)])).unwrap();
        assert_eq!((p1.value, p2.value), (1.0, 1.0));
        assert!(estimate_predictabilities(&rec(Experiment::Fig1, &[("0", 1)])).is_err());
    }

    #[test]
    fn visibility_examples() {
        let (v1, v2) = estimate_visibilities(&rec(VIS, &[("00", 500), ("10", 500)])).unwrap();
        assert_eq!((v1.value, v2.value), (0.0, 1.0));
        let (v1, v2) = estimate_visibilities(&rec(VIS, &[("00", 1000)])).unwrap();
        assert_eq!((v1.value, v2.value), (1.0, 1.0));
        let (v1, v2) = estimate_visibilities(&rec(VIS, &[("00", 250), ("01", 250), ("10", 250), ("11", 250)])).unwrap();
        assert_eq!((v1.value, v2.value), (0.0, 0.0));
    }

    #[test]
    fn custom_counts_are_accepted_by_two_ancilla_estimators() {
        let custom = Experiment::Universal(CircuitMode::Custom { pre: [0.0; 3], post: [0.0; 3], ancilla: [0.0; 3] });
        assert!(estimate_predictabilities(&rec(custom, &[("00", 3)])).is_ok());
    }

    #[test]
    fn record_validation() {
        assert!(matches!(CountsRecord::from_counts(Experiment::Fig1, 0, [("01", 1)]), Err(Error::OutcomeArity { .. })));
        assert!(matches!(CountsRecord::from_counts(Experiment::Fig1, 0, [("x", 1)]), Err(Error::OutcomeLabel(_))));
        assert_eq!(CountsRecord::from_counts(Experiment::Fig1, 0, [("0", 0)]), Err(Error::NoShots));
        let mut r = rec(Experiment::Fig1, &[("0", 5)]);
        r.shots = 6;
        assert_eq!(r.frequencies(), Err(Error::ShotMismatch { sum: 5, shots: 6 }));
    }

    #[test]
    fn reconstruct_examples() {
        let c = rec(Experiment::Fig1, &[("1", 640), ("0", 360)]);
        // (0.8, 0.6, 0, 0): p10 = (α+β)²/2 = 0.98, p01 = (β-α)²/2 = 0.02
        let p = rec(PRED, &[("10", 98), ("01", 2)]);
        // p00 = (η+β)²/2, p01 = (γ-α)²/2, p10 = (α+γ)²/2, p11 = (η-β)²/2
        let v = rec(VIS, &[("00", 18), ("11", 18), ("01", 32), ("10", 32)]);
        let r = reconstruct_complementarity(&c, &p, &v).unwrap();
        assert!((r.concurrence - 0.28).abs() < 1e-15);
        assert!((r.predictability_1 - 0.96).abs() < 1e-15);
        assert!(r.triality_residual_1.abs() < 1e-14);
        assert!(r.standard_errors.is_some());

        assert!(matches!(reconstruct_complementarity(&p, &p, &v), Err(Error::ModeMismatch { .. })));
        assert!(matches!(reconstruct_complementarity(&c, &v, &p), Err(Error::ModeMismatch { .. })));
    }

    #[test]
    fn reconstruct_bell_state_from_exact_frequencies() {
        let psi_minus = StateVector::from_real(&BELL_KETS[0]).unwrap();
        let runs: Vec<RunResult> = CircuitMode::PRESETS
            .iter()
            .map(|&m| run_exact(&universal_circuit(m), &psi_minus).unwrap())
            .collect();
        let r = reconstruct_from_exact(&runs[0], &runs[1], &runs[2]).unwrap();
        assert!((r.concurrence - 1.0).abs() < 1e-12);
        assert!(r.triality_residual_1.abs() < 1e-12 && r.triality_residual_2.abs() < 1e-12);
        assert_eq!(r.standard_errors.unwrap().concurrence, 0.0);
    }
}
