#ifndef SIXSTATE_H
#define SIXSTATE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SixstateStatus {
  SIXSTATE_STATUS_OK = 0,
  SIXSTATE_STATUS_NULL_POINTER = 1,
  /**
   * Argument outside its domain.
   */
  SIXSTATE_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Parameters do not describe a valid attack.
   */
  SIXSTATE_STATUS_INFEASIBLE = 3,
  /**
   * Internal numerical failure.
   */
  SIXSTATE_STATUS_NUMERICAL = 4,
  SIXSTATE_STATUS_PANIC = 5,
} SixstateStatus;

typedef enum SixstateMetric {
  /**
   * Guess every bit of the group.
   */
  SIXSTATE_METRIC_PCG = 0,
  /**
   * Guess a bit Bob received undisturbed.
   */
  SIXSTATE_METRIC_UNDISTURBED = 1,
  SIXSTATE_METRIC_SHANNON = 2,
  SIXSTATE_METRIC_RENYI = 3,
  SIXSTATE_METRIC_XOR = 4,
} SixstateMetric;

/**
 * Two-qubit attack parameters.
 */
typedef struct SixstateCoherent2 SixstateCoherent2;

/**
 * Three-qubit attack parameters.
 */
typedef struct SixstateCoherent3 SixstateCoherent3;

typedef struct SixstateIncoherentMetrics {
  double fidelity;
  double disturbance;
  double ps;
  double pg;
  double pg_undisturbed;
  double shannon;
  double renyi;
} SixstateIncoherentMetrics;

typedef struct SixstateCoherent2Metrics {
  double alpha;
  double beta;
  double gamma;
  double pcg;
  double pcg_undisturbed;
  double shannon;
  double renyi;
  double xor;
} SixstateCoherent2Metrics;

typedef struct SixstateOptimum {
  double alpha;
  /**
   * Zero for the two-qubit attack.
   */
  double beta;
  double value;
} SixstateOptimum;

typedef struct SixstateCoherent3Metrics {
  double alpha;
  double beta;
  double gamma;
  double delta;
  double pcg;
  double undisturbed_accuracy;
  double xor;
} SixstateCoherent3Metrics;

/**
 * Point estimates of a simulation run; `eve_xor_accuracy` is NaN when
 * pairing was off or no pair qualified.
 */
typedef struct SixstateSimSummary {
  uint64_t qubits_sent;
  uint64_t sifted;
  uint64_t pairs;
  double sift_rate;
  double qber;
  double eve_bit_accuracy;
  double eve_undisturbed_accuracy;
  double eve_disturbed_accuracy;
  double eve_xor_accuracy;
} SixstateSimSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *sixstate_last_error(void);

/**
 * Static description of a status code.
 */
const char *sixstate_status_str(enum SixstateStatus status);

/**
 * Metrics of the single-qubit attack with disturbance `d` in `[0, 2/3]`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SixstateStatus sixstate_incoherent_metrics(double d, struct SixstateIncoherentMetrics *out);

/**
 * Two-qubit attack at disturbance `d` with weight `alpha` on the undisturbed pair.
 *
 * # Safety
 * `out` must be valid for writes; release the handle with [`sixstate_coherent2_free`].
 */
enum SixstateStatus sixstate_coherent2_new(double d, double alpha, struct SixstateCoherent2 **out);

/**
 * # Safety
 * `h` must be null or a handle from [`sixstate_coherent2_new`] not yet freed.
 */
void sixstate_coherent2_free(struct SixstateCoherent2 *h);

/**
 * # Safety
 * `h` must be a live handle and `out` valid for writes.
 */
enum SixstateStatus sixstate_coherent2_metrics(const struct SixstateCoherent2 *h,
                                               struct SixstateCoherent2Metrics *out);

/**
 * Best two-qubit attack at disturbance `d` in `(0, 1/2)` for `metric`.
 * `grid` is the number of scan points; 0 selects the default.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SixstateStatus sixstate_coherent2_optimize(double d,
                                                enum SixstateMetric metric,
                                                uint32_t grid,
                                                struct SixstateOptimum *out);

/**
 * Three-qubit attack at disturbance `d` with weights `alpha` (no qubit
 * disturbed) and `beta` (one given qubit disturbed).
 *
 * # Safety
 * `out` must be valid for writes; release the handle with [`sixstate_coherent3_free`].
 */
enum SixstateStatus sixstate_coherent3_new(double d,
                                           double alpha,
                                           double beta,
                                           struct SixstateCoherent3 **out);

/**
 * # Safety
 * `h` must be null or a handle from [`sixstate_coherent3_new`] not yet freed.
 */
void sixstate_coherent3_free(struct SixstateCoherent3 *h);

/**
 * # Safety
 * `h` must be a live handle and `out` valid for writes.
 */
enum SixstateStatus sixstate_coherent3_metrics(const struct SixstateCoherent3 *h,
                                               struct SixstateCoherent3Metrics *out);

/**
 * Best three-qubit attack at disturbance `d` in `(0, 1/2)`. Only `Pcg`,
 * `Undisturbed` and `Xor` are available. `grid` is the per-axis scan
 * resolution; 0 selects the default.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SixstateStatus sixstate_coherent3_optimize(double d,
                                                enum SixstateMetric metric,
                                                uint32_t grid,
                                                struct SixstateOptimum *out);

/**
 * Xor guessing probability with one probe per qubit.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SixstateStatus sixstate_p_xor1(double d, double *out);

/**
 * Xor guessing probability with one probe on both qubits.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SixstateStatus sixstate_p_xor2(double alpha, double d, double *out);

/**
 * Monte Carlo run with the single-qubit attack at disturbance `d`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SixstateStatus sixstate_simulate_incoherent(double d,
                                                 uint64_t trials,
                                                 uint64_t seed,
                                                 bool xor_pairing,
                                                 struct SixstateSimSummary *out);

/**
 * # Safety
 * `h` must be a live handle and `out` valid for writes.
 */
enum SixstateStatus sixstate_simulate_coherent2(const struct SixstateCoherent2 *h,
                                                uint64_t trials,
                                                uint64_t seed,
                                                bool xor_pairing,
                                                struct SixstateSimSummary *out);

/**
 * # Safety
 * `h` must be a live handle and `out` valid for writes.
 */
enum SixstateStatus sixstate_simulate_coherent3(const struct SixstateCoherent3 *h,
                                                uint64_t trials,
                                                uint64_t seed,
                                                bool xor_pairing,
                                                struct SixstateSimSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIXSTATE_H */
