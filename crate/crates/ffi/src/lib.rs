//! C ABI for `qnd-core`.
//!
//! Every fallible function returns a [`QndStatus`] and writes its result
//! through an out-pointer. Handles are heap objects owned by the caller and
//! released with the matching `*_free` function. Panics are caught at the
//! boundary and reported as [`QndStatus::Internal`].

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use qnd_core::harness::{estimate_concurrence, reconstruct_from_exact};
use qnd_core::num_complex::Complex64;
use qnd_core::{
    computational_from_bell, concurrence_circuit, estimate_predictabilities, estimate_visibilities,
    observables_from_bell, observables_of_state, reconstruct_complementarity, run_exact, sample_sharded,
    universal_circuit, BellCoefficients, Circuit, CircuitMode, ComplementarityReport, CountsRecord, Error,
    EstimateWithError, RunResult, StateVector,
};

pub const QND_MODE_CONCURRENCE: u32 = 0;
pub const QND_MODE_PREDICTABILITY: u32 = 1;
pub const QND_MODE_VISIBILITY: u32 = 2;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QndStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotNormalized = 3,
    NotRebit = 4,
    ModeMismatch = 5,
    NoShots = 6,
    BufferTooSmall = 7,
    NotFound = 8,
    Internal = 99,
}

impl From<&Error> for QndStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotNormalized(_) => QndStatus::NotNormalized,
            Error::RebitViolation(_) => QndStatus::NotRebit,
            Error::ModeMismatch { .. } | Error::OutcomeArity { .. } => QndStatus::ModeMismatch,
            Error::NoShots => QndStatus::NoShots,
            _ => QndStatus::InvalidArgument,
        }
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn qnd_status_message(status: i32) -> *const c_char {
    let msg: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer argument\0",
        2 => b"invalid argument\0",
        3 => b"state is not normalized\0",
        4 => b"state is not real up to a global phase\0",
        5 => b"counts come from a different experiment\0",
        6 => b"shot count must be positive\0",
        7 => b"output buffer too small\0",
        8 => b"no such outcome\0",
        99 => b"internal error\0",
        _ => b"unknown status\0",
    };
    msg.as_ptr().cast()
}

pub struct QndState(StateVector);
pub struct QndCircuit(Circuit);
pub struct QndRunResult(RunResult);
pub struct QndCounts(CountsRecord);

/// Complementarity quantities of one two-qubit state. Indices 0 and 1 refer
/// to the first and second qubit.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QndComplementarity {
    pub concurrence: f64,
    pub visibility: [f64; 2],
    pub predictability: [f64; 2],
    pub single_partitedness: [f64; 2],
    pub triality_residual: [f64; 2],
}

impl From<&ComplementarityReport> for QndComplementarity {
    fn from(r: &ComplementarityReport) -> Self {
        QndComplementarity {
            concurrence: r.concurrence,
            visibility: [r.visibility_1, r.visibility_2],
            predictability: [r.predictability_1, r.predictability_2],
            single_partitedness: [r.single_partitedness_1, r.single_partitedness_2],
            triality_residual: [r.triality_residual_1, r.triality_residual_2],
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QndEstimate {
    pub value: f64,
    pub std_error: f64,
}

impl From<EstimateWithError> for QndEstimate {
    fn from(e: EstimateWithError) -> Self {
        QndEstimate { value: e.value, std_error: e.std_error }
    }
}

fn guard(f: impl FnOnce() -> Result<(), QndStatus>) -> QndStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QndStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => QndStatus::Internal,
    }
}

fn core<T>(r: qnd_core::Result<T>) -> Result<T, QndStatus> {
    r.map_err(|e| QndStatus::from(&e))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, QndStatus> {
    p.as_ref().ok_or(QndStatus::NullPointer)
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], QndStatus> {
    if p.is_null() {
        return Err(QndStatus::NullPointer);
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), QndStatus> {
    if out.is_null() {
        return Err(QndStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), QndStatus> {
    if out.is_null() {
        return Err(QndStatus::NullPointer);
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

unsafe fn bell(coeffs: *const f64) -> Result<BellCoefficients, QndStatus> {
    let c = slice(coeffs, 4)?;
    core(BellCoefficients::new(c[0], c[1], c[2], c[3]))
}

// ---- states ----

/// Two-qubit state `α|ψ⁻> + β|ψ⁺> + γ|φ⁻> + η|φ⁺>` from `coeffs = {α, β, γ, η}`.
///
/// # Safety
/// `coeffs` must point to 4 doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_state_from_bell(coeffs: *const f64, out: *mut *mut QndState) -> QndStatus {
    guard(|| {
        let state = core(computational_from_bell(&bell(coeffs)?))?;
        write_handle(out, QndState(state))
    })
}

/// State from `n_amplitudes` interleaved `(re, im)` pairs, qubit 0 most significant.
///
/// # Safety
/// `re_im` must point to `2 * n_amplitudes` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_state_from_amplitudes(
    re_im: *const f64,
    n_amplitudes: usize,
    out: *mut *mut QndState,
) -> QndStatus {
    guard(|| {
        let raw = slice(re_im, 2 * n_amplitudes)?;
        let amps = raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        write_handle(out, QndState(core(StateVector::from_amplitudes(amps))?))
    })
}

/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qnd_state_free(state: *mut QndState) {
    free(state)
}

/// Number of qubits, or 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qnd_state_num_qubits(state: *const QndState) -> usize {
    state.as_ref().map_or(0, |s| s.0.n_qubits())
}

/// Copies the amplitudes as interleaved `(re, im)` pairs into `out`, which
/// holds `capacity` pairs.
///
/// # Safety
/// `state` must be live and `out` must hold `capacity` pairs of doubles.
#[no_mangle]
pub unsafe extern "C" fn qnd_state_amplitudes(state: *const QndState, out: *mut f64, capacity: usize) -> QndStatus {
    guard(|| {
        let amps = deref(state)?.0.amplitudes();
        if out.is_null() {
            return Err(QndStatus::NullPointer);
        }
        if capacity < amps.len() {
            return Err(QndStatus::BufferTooSmall);
        }
        let dst = std::slice::from_raw_parts_mut(out, 2 * amps.len());
        for (pair, z) in dst.chunks_exact_mut(2).zip(amps) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// Complementarity quantities of a two-qubit state from its amplitudes.
///
/// # Safety
/// `state` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_state_observables(state: *const QndState, out: *mut QndComplementarity) -> QndStatus {
    guard(|| {
        let report = core(observables_of_state(&deref(state)?.0))?;
        write(out, QndComplementarity::from(&report))
    })
}

/// Closed-form complementarity quantities from real Bell coefficients.
///
/// # Safety
/// `coeffs` must point to 4 doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_bell_observables(coeffs: *const f64, out: *mut QndComplementarity) -> QndStatus {
    guard(|| {
        let report = core(observables_from_bell(&bell(coeffs)?))?;
        write(out, QndComplementarity::from(&report))
    })
}

// ---- circuits ----

/// Single-ancilla concurrence circuit.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_circuit_concurrence(out: *mut *mut QndCircuit) -> QndStatus {
    guard(|| write_handle(out, QndCircuit(concurrence_circuit())))
}

/// Two-ancilla circuit with one of the `QND_MODE_*` presets.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_circuit_universal(mode: u32, out: *mut *mut QndCircuit) -> QndStatus {
    guard(|| {
        let mode = match mode {
            QND_MODE_CONCURRENCE => CircuitMode::Concurrence,
            QND_MODE_PREDICTABILITY => CircuitMode::Predictability,
            QND_MODE_VISIBILITY => CircuitMode::Visibility,
            _ => return Err(QndStatus::InvalidArgument),
        };
        write_handle(out, QndCircuit(universal_circuit(mode)))
    })
}

/// Two-ancilla circuit with explicit rotation vectors (3 doubles each).
///
/// # Safety
/// Each angle pointer must hold 3 doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_circuit_custom(
    pre: *const f64,
    post: *const f64,
    ancilla: *const f64,
    out: *mut *mut QndCircuit,
) -> QndStatus {
    guard(|| {
        let vec3 = |p: *const f64| -> Result<[f64; 3], QndStatus> {
            let s = slice(p, 3)?;
            if s.iter().any(|x| !x.is_finite()) {
                return Err(QndStatus::InvalidArgument);
            }
            Ok([s[0], s[1], s[2]])
        };
        let mode = CircuitMode::Custom { pre: vec3(pre)?, post: vec3(post)?, ancilla: vec3(ancilla)? };
        write_handle(out, QndCircuit(universal_circuit(mode)))
    })
}

/// # Safety
/// `circuit` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qnd_circuit_free(circuit: *mut QndCircuit) {
    free(circuit)
}

/// Number of ancilla bits read out by `circuit`, or 0 for a null handle.
///
/// # Safety
/// `circuit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qnd_circuit_num_ancillas(circuit: *const QndCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.n_ancilla())
}

// ---- exact runs ----

/// Runs `circuit` on a two-qubit `state` and measures the ancillas exactly.
///
/// # Safety
/// `circuit` and `state` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_run_exact(
    circuit: *const QndCircuit,
    state: *const QndState,
    out: *mut *mut QndRunResult,
) -> QndStatus {
    guard(|| {
        let run = core(run_exact(&deref(circuit)?.0, &deref(state)?.0))?;
        write_handle(out, QndRunResult(run))
    })
}

/// # Safety
/// `run` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qnd_run_free(run: *mut QndRunResult) {
    free(run)
}

/// Probability of ancilla outcome `bits` (first ancilla most significant).
///
/// # Safety
/// `run` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_run_probability(run: *const QndRunResult, bits: usize, out: *mut f64) -> QndStatus {
    guard(|| {
        let run = &deref(run)?.0;
        if bits >> run.experiment.ancilla_count() != 0 {
            return Err(QndStatus::InvalidArgument);
        }
        write(out, run.probability(bits))
    })
}

/// Two-qubit state left behind by outcome `bits`. Returns `NotFound` for an
/// outcome of zero probability.
///
/// # Safety
/// `run` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_run_branch_state(
    run: *const QndRunResult,
    bits: usize,
    out: *mut *mut QndState,
) -> QndStatus {
    guard(|| {
        let branch = deref(run)?.0.branch(bits).ok_or(QndStatus::NotFound)?;
        write_handle(out, QndState(branch.system_state.clone()))
    })
}

/// Complementarity report from exact runs of the concurrence (either circuit),
/// predictability and visibility experiments on the same input.
///
/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_run_reconstruct(
    concurrence: *const QndRunResult,
    predictability: *const QndRunResult,
    visibility: *const QndRunResult,
    out: *mut QndComplementarity,
) -> QndStatus {
    guard(|| {
        let report = core(reconstruct_from_exact(&deref(concurrence)?.0, &deref(predictability)?.0, &deref(visibility)?.0))?;
        write(out, QndComplementarity::from(&report))
    })
}

// ---- sampling ----

/// Samples `shots` ancilla readouts. The counts depend only on `seed`, not on
/// `shards`.
///
/// # Safety
/// `circuit` and `state` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_sample(
    circuit: *const QndCircuit,
    state: *const QndState,
    shots: u64,
    seed: u64,
    shards: u64,
    out: *mut *mut QndCounts,
) -> QndStatus {
    guard(|| {
        let record = core(sample_sharded(&deref(circuit)?.0, &deref(state)?.0, shots, seed, shards.max(1)))?;
        write_handle(out, QndCounts(record))
    })
}

/// # Safety
/// `counts` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qnd_counts_free(counts: *mut QndCounts) {
    free(counts)
}

/// Number of shots recorded for outcome `bits`.
///
/// # Safety
/// `counts` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_counts_get(counts: *const QndCounts, bits: usize, out: *mut u64) -> QndStatus {
    guard(|| {
        let record = &deref(counts)?.0;
        if bits >> record.experiment.ancilla_count() != 0 {
            return Err(QndStatus::InvalidArgument);
        }
        write(out, record.count(bits))
    })
}

/// Concurrence from counts of either concurrence circuit.
///
/// # Safety
/// `counts` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_estimate_concurrence(counts: *const QndCounts, out: *mut QndEstimate) -> QndStatus {
    guard(|| write(out, core(estimate_concurrence(&deref(counts)?.0))?.into()))
}

/// `{P₁, P₂}` from predictability-preset counts.
///
/// # Safety
/// `counts` must be live and `out` must hold 2 estimates.
#[no_mangle]
pub unsafe extern "C" fn qnd_estimate_predictabilities(counts: *const QndCounts, out: *mut QndEstimate) -> QndStatus {
    guard(|| {
        let (p1, p2) = core(estimate_predictabilities(&deref(counts)?.0))?;
        write(out.cast::<[QndEstimate; 2]>(), [p1.into(), p2.into()])
    })
}

/// `{V₁, V₂}` from visibility-preset counts.
///
/// # Safety
/// `counts` must be live and `out` must hold 2 estimates.
#[no_mangle]
pub unsafe extern "C" fn qnd_estimate_visibilities(counts: *const QndCounts, out: *mut QndEstimate) -> QndStatus {
    guard(|| {
        let (v1, v2) = core(estimate_visibilities(&deref(counts)?.0))?;
        write(out.cast::<[QndEstimate; 2]>(), [v1.into(), v2.into()])
    })
}

/// Complementarity report from the three sampled experiments. Standard
/// errors are not exposed here.
///
/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qnd_counts_reconstruct(
    concurrence: *const QndCounts,
    predictability: *const QndCounts,
    visibility: *const QndCounts,
    out: *mut QndComplementarity,
) -> QndStatus {
    guard(|| {
        let report = core(reconstruct_complementarity(
            &deref(concurrence)?.0,
            &deref(predictability)?.0,
            &deref(visibility)?.0,
        ))?;
        write(out, QndComplementarity::from(&report))
    })
}
