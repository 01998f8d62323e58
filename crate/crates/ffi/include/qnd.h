#ifndef QND_H
#define QND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define QND_MODE_CONCURRENCE 0

#define QND_MODE_PREDICTABILITY 1

#define QND_MODE_VISIBILITY 2

typedef enum QndStatus {
  QND_STATUS_OK = 0,
  QND_STATUS_NULL_POINTER = 1,
  QND_STATUS_INVALID_ARGUMENT = 2,
  QND_STATUS_NOT_NORMALIZED = 3,
  QND_STATUS_NOT_REBIT = 4,
  QND_STATUS_MODE_MISMATCH = 5,
  QND_STATUS_NO_SHOTS = 6,
  QND_STATUS_BUFFER_TOO_SMALL = 7,
  QND_STATUS_NOT_FOUND = 8,
  QND_STATUS_INTERNAL = 99,
} QndStatus;

typedef struct QndCircuit QndCircuit;

typedef struct QndCounts QndCounts;

typedef struct QndRunResult QndRunResult;

typedef struct QndState QndState;

// Complementarity quantities of one two-qubit state. Indices 0 and 1 refer
// to the first and second qubit.
typedef struct QndComplementarity {
  double concurrence;
  double visibility[2];
  double predictability[2];
  double single_partitedness[2];
  double triality_residual[2];
} QndComplementarity;

typedef struct QndEstimate {
  double value;
  double std_error;
} QndEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, NUL-terminated description of a status code.
const char *qnd_status_message(int32_t status);

// Two-qubit state `α|ψ⁻> + β|ψ⁺> + γ|φ⁻> + η|φ⁺>` from `coeffs = {α, β, γ, η}`.
//
// # Safety
// `coeffs` must point to 4 doubles and `out` must be writable.
enum QndStatus qnd_state_from_bell(const double *coeffs, struct QndState **out);

// State from `n_amplitudes` interleaved `(re, im)` pairs, qubit 0 most significant.
//
// # Safety
// `re_im` must point to `2 * n_amplitudes` doubles and `out` must be writable.
enum QndStatus qnd_state_from_amplitudes(const double *re_im,
                                         size_t n_amplitudes,
                                         struct QndState **out);

// # Safety
// `state` must be null or a handle not yet freed.
void qnd_state_free(struct QndState *state);

// Number of qubits, or 0 for a null handle.
//
// # Safety
// `state` must be null or a live handle.
size_t qnd_state_num_qubits(const struct QndState *state);

// Copies the amplitudes as interleaved `(re, im)` pairs into `out`, which
// holds `capacity` pairs.
//
// # Safety
// `state` must be live and `out` must hold `capacity` pairs of doubles.
enum QndStatus qnd_state_amplitudes(const struct QndState *state, double *out, size_t capacity);

// Complementarity quantities of a two-qubit state from its amplitudes.
//
// # Safety
// `state` must be live and `out` writable.
enum QndStatus qnd_state_observables(const struct QndState *state, struct QndComplementarity *out);

// Closed-form complementarity quantities from real Bell coefficients.
//
// # Safety
// `coeffs` must point to 4 doubles and `out` must be writable.
enum QndStatus qnd_bell_observables(const double *coeffs, struct QndComplementarity *out);

// Single-ancilla concurrence circuit.
//
// # Safety
// `out` must be writable.
enum QndStatus qnd_circuit_concurrence(struct QndCircuit **out);

// Two-ancilla circuit with one of the `QND_MODE_*` presets.
//
// # Safety
// `out` must be writable.
enum QndStatus qnd_circuit_universal(uint32_t mode, struct QndCircuit **out);

// Two-ancilla circuit with explicit rotation vectors (3 doubles each).
//
// # Safety
// Each angle pointer must hold 3 doubles and `out` must be writable.
enum QndStatus qnd_circuit_custom(const double *pre,
                                  const double *post,
                                  const double *ancilla,
                                  struct QndCircuit **out);

// # Safety
// `circuit` must be null or a handle not yet freed.
void qnd_circuit_free(struct QndCircuit *circuit);

// Number of ancilla bits read out by `circuit`, or 0 for a null handle.
//
// # Safety
// `circuit` must be null or a live handle.
size_t qnd_circuit_num_ancillas(const struct QndCircuit *circuit);

// Runs `circuit` on a two-qubit `state` and measures the ancillas exactly.
//
// # Safety
// `circuit` and `state` must be live and `out` writable.
enum QndStatus qnd_run_exact(const struct QndCircuit *circuit,
                             const struct QndState *state,
                             struct QndRunResult **out);

// # Safety
// `run` must be null or a handle not yet freed.
void qnd_run_free(struct QndRunResult *run);

// Probability of ancilla outcome `bits` (first ancilla most significant).
//
// # Safety
// `run` must be live and `out` writable.
enum QndStatus qnd_run_probability(const struct QndRunResult *run, size_t bits, double *out);

// Two-qubit state left behind by outcome `bits`. Returns `NotFound` for an
// outcome of zero probability.
//
// # Safety
// `run` must be live and `out` writable.
enum QndStatus qnd_run_branch_state(const struct QndRunResult *run,
                                    size_t bits,
                                    struct QndState **out);

// Complementarity report from exact runs of the concurrence (either circuit),
// predictability and visibility experiments on the same input.
//
// # Safety
// All handles must be live and `out` writable.
enum QndStatus qnd_run_reconstruct(const struct QndRunResult *concurrence,
                                   const struct QndRunResult *predictability,
                                   const struct QndRunResult *visibility,
                                   struct QndComplementarity *out);

// Samples `shots` ancilla readouts. The counts depend only on `seed`, not on
// `shards`.
//
// # Safety
// `circuit` and `state` must be live and `out` writable.
enum QndStatus qnd_sample(const struct QndCircuit *circuit,
                          const struct QndState *state,
                          uint64_t shots,
                          uint64_t seed,
                          uint64_t shards,
                          struct QndCounts **out);

// # Safety
// `counts` must be null or a handle not yet freed.
void qnd_counts_free(struct QndCounts *counts);

// Number of shots recorded for outcome `bits`.
//
// # Safety
// `counts` must be live and `out` writable.
enum QndStatus qnd_counts_get(const struct QndCounts *counts, size_t bits, uint64_t *out);

// Concurrence from counts of either concurrence circuit.
//
// # Safety
// `counts` must be live and `out` writable.
enum QndStatus qnd_estimate_concurrence(const struct QndCounts *counts, struct QndEstimate *out);

// `{P₁, P₂}` from predictability-preset counts.
//
// # Safety
// `counts` must be live and `out` must hold 2 estimates.
enum QndStatus qnd_estimate_predictabilities(const struct QndCounts *counts,
                                             struct QndEstimate *out);

// `{V₁, V₂}` from visibility-preset counts.
//
// # Safety
// `counts` must be live and `out` must hold 2 estimates.
enum QndStatus qnd_estimate_visibilities(const struct QndCounts *counts, struct QndEstimate *out);

// Complementarity report from the three sampled experiments. Standard
// errors are not exposed here.
//
// # Safety
// All handles must be live and `out` writable.
enum QndStatus qnd_counts_reconstruct(const struct QndCounts *concurrence,
                                      const struct QndCounts *predictability,
                                      const struct QndCounts *visibility,
                                      struct QndComplementarity *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QND_H */
