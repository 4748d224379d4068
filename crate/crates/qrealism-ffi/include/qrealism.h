/* C interface to the qrealism quantum-controlled interferometer library. */

#ifndef QREALISM_H
#define QREALISM_H

/* Generated by cbindgen from qrealism-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every C-ABI call.
 */
typedef enum {
  /**
   * Success.
   */
  QR_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  QR_STATUS_NULL_POINTER = 1,
  /**
   * An argument was out of range or otherwise invalid.
   */
  QR_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A pulse-sequence file failed to parse.
   */
  QR_STATUS_PARSE_ERROR = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  QR_STATUS_UTF8_ERROR = 4,
  /**
   * Unexpected internal failure.
   */
  QR_STATUS_INTERNAL = 5,
} QrStatus;

/**
 * Which interferometer circuit to simulate.
 */
typedef enum {
  /**
   * Quantum delayed-choice arrangement (controlled final device).
   */
  QR_CIRCUIT_QDCE = 0,
  /**
   * Quantum-controlled reality arrangement (controlled first device).
   */
  QR_CIRCUIT_QCRE = 1,
} QrCircuit;

/**
 * Circuit stage selector for state constructors.
 */
typedef enum {
  QR_STAGE_INPUT = 0,
  QR_STAGE_INSIDE = 1,
  QR_STAGE_OUTPUT = 2,
} QrStage;

/**
 * Opaque handle to a density operator.
 */
typedef struct QrState QrState;

/**
 * Realism quantifiers of one circuit point (all in bits except visibility).
 */
typedef struct {
  double wave_realism;
  double particle_realism;
  double visibility;
  double bound_rhs;
  double discord;
  double mutual_information;
} QrRealismReport;

/**
 * Mean and standard deviation of one Monte Carlo quantity.
 */
typedef struct {
  double mean;
  double std;
} QrStatistic;

/**
 * Monte Carlo error report for one circuit point.
 */
typedef struct {
  QrStatistic wave_realism;
  QrStatistic particle_realism;
  QrStatistic visibility;
  QrStatistic detection_probability;
  uintptr_t samples;
} QrMonteCarlo;

/**
 * Result of checking a pulse sequence against an ideal circuit unitary.
 */
typedef struct {
  bool equal;
  double phase;
  double max_deviation;
  double duration_seconds;
  uintptr_t rotation_count;
} QrPulseCheck;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the library as a static NUL-terminated string.
 */
const char *qr_version(void);

/**
 * Static human-readable description of a status code.
 */
const char *qr_status_message(QrStatus status);

/**
 * Builds the joint (path, controller) state of a circuit at a stage.
 * On success writes a heap-allocated handle to `out`; release it with
 * [`qr_state_free`].
 *
 * # Safety
 * `out` must be a valid pointer to writable memory for one pointer.
 */
QrStatus qr_stage_state_new(QrCircuit circuit,
                            QrStage stage,
                            double alpha,
                            double theta,
                            QrState **out);

/**
 * Releases a handle returned by a constructor. Null is ignored.
 *
 * # Safety
 * `state` must be null or a pointer previously returned by this library
 * and not yet freed.
 */
void qr_state_free(QrState *state);

/**
 * Hilbert-space dimension of the handle's state.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
QrStatus qr_state_dim(const QrState *state, uintptr_t *out);

/**
 * Von Neumann entropy of the handle's state, in bits.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
QrStatus qr_state_entropy(const QrState *state, double *out);

/**
 * Purity Tr(rho^2) of the handle's state.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
QrStatus qr_state_purity(const QrState *state, double *out);

/**
 * One matrix element of the handle's state, split into real and imaginary
 * parts.
 *
 * # Safety
 * `state` must be a live handle; `out_re` and `out_im` must be writable.
 */
QrStatus qr_state_element(const QrState *state,
                          uintptr_t row,
                          uintptr_t col,
                          double *out_re,
                          double *out_im);

/**
 * Wave and particle realism of the path qubit of a handle's state, using
 * the theta-matched wave/particle bases. The state must carry the
 * (path, ctrl) factor layout produced by [`qr_stage_state_new`].
 *
 * # Safety
 * `state` must be a live handle; `out_wave` and `out_particle` must be
 * writable.
 */
QrStatus qr_state_path_realism(const QrState *state,
                               double theta,
                               double *out_wave,
                               double *out_particle);

/**
 * Full realism report of the inside stage at (alpha, theta).
 *
 * # Safety
 * `out` must be a valid pointer to a writable [`QrRealismReport`].
 */
QrStatus qr_realism_inside(QrCircuit circuit, double alpha, double theta, QrRealismReport *out);

/**
 * Probability of firing detector D0 at the circuit output.
 *
 * # Safety
 * `out` must be writable.
 */
QrStatus qr_detection_probability(QrCircuit circuit, double alpha, double theta, double *out);

/**
 * Interference visibility from a theta sweep at the given resolution
 * (at least 360 points).
 *
 * # Safety
 * `out` must be writable.
 */
QrStatus qr_visibility(QrCircuit circuit, double alpha, uintptr_t resolution, double *out);

/**
 * Right-hand side of the controlled-reality complementarity bound at a
 * visibility in [0, 1].
 *
 * # Safety
 * `out` must be writable.
 */
QrStatus qr_qcre_bound(double visibility, double *out);

/**
 * Binary entropy h(u) in bits for u in [0, 1].
 *
 * # Safety
 * `out` must be writable.
 */
QrStatus qr_binary_entropy(double u, double *out);

/**
 * Monte Carlo propagation of tomography noise into the realism
 * quantifiers; deterministic for fixed (sigma, samples, seed).
 *
 * # Safety
 * `out` must be a valid pointer to a writable [`QrMonteCarlo`].
 */
QrStatus qr_monte_carlo(QrCircuit circuit,
                        double alpha,
                        double theta,
                        double sigma,
                        uintptr_t samples,
                        uint64_t seed,
                        QrMonteCarlo *out);

/**
 * Parses a pulse-sequence source text (with `alpha`/`theta` bound to the
 * given angles), compiles it, and checks equivalence up to a global phase
 * against the ideal full-protocol unitary of the chosen circuit.
 *
 * # Safety
 * `sequence` must be a NUL-terminated string; `out` must be a valid
 * pointer to a writable [`QrPulseCheck`].
 */
QrStatus qr_pulse_check(const char *sequence,
                        QrCircuit circuit,
                        double alpha,
                        double theta,
                        double tolerance,
                        QrPulseCheck *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QREALISM_H */
