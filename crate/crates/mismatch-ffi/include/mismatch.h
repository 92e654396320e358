#ifndef MISMATCH_FFI_H
#define MISMATCH_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes for every FFI entry point.
 */
typedef enum MismatchStatus {
  MismatchStatus_Ok = 0,
  MismatchStatus_NullPointer = 1,
  MismatchStatus_InvalidInput = 2,
  MismatchStatus_DimensionMismatch = 3,
  MismatchStatus_Degenerate = 4,
  MismatchStatus_Infeasible = 5,
} MismatchStatus;

/**
 * Opaque pure-state handle.
 */
typedef struct MismatchPure MismatchPure;

/**
 * Opaque density-matrix handle.
 */
typedef struct MismatchState MismatchState;

/**
 * Flat analysis report; `has_decomposition` gates the eta/mu1/delta fields
 * and `has_delta_bound` gates `delta_bound` (absent when delta > 1).
 */
typedef struct MismatchReport {
  double c;
  double lambda;
  double gap;
  bool near_degenerate;
  double fidelity;
  double sigma;
  double upper_bound;
  double lower_bound;
  double noise_floor;
  bool has_decomposition;
  double eta;
  double mu1;
  double delta;
  bool has_delta_bound;
  double delta_bound;
} MismatchReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a density-matrix handle from `dim * dim` row-major complex entries
 * given as `2 * dim * dim` doubles (re, im interleaved). Validates trace,
 * Hermiticity and positivity. On success writes the handle to `out`.
 *
 * # Safety
 * `entries` must point to `2 * dim * dim` readable doubles and `out` must
 * be a valid pointer.
 */
enum MismatchStatus mismatch_state_new(uintptr_t dim,
                                       const double *entries,
                                       struct MismatchState **out);

/**
 * Create a pure-state handle from `dim` complex amplitudes given as
 * `2 * dim` doubles. The vector must be normalized.
 *
 * # Safety
 * `amplitudes` must point to `2 * dim` readable doubles and `out` must be a
 * valid pointer.
 */
enum MismatchStatus mismatch_pure_new(uintptr_t dim,
                                      const double *amplitudes,
                                      struct MismatchPure **out);

/**
 * Destroy a density-matrix handle. Null is a no-op.
 *
 * # Safety
 * `state` must be a pointer previously returned by `mismatch_state_new`,
 * and must not be used afterwards.
 */
void mismatch_state_free(struct MismatchState *state);

/**
 * Destroy a pure-state handle. Null is a no-op.
 *
 * # Safety
 * `pure` must be a pointer previously returned by `mismatch_pure_new`, and
 * must not be used afterwards.
 */
void mismatch_pure_free(struct MismatchPure *pure);

/**
 * Analyze a (state, ideal) pair: mismatch of the dominant eigenvector, the
 * commutator bounds, the optimal eta-decomposition when one exists, and the
 * distillation noise floor.
 *
 * # Safety
 * All pointers must be valid handles/out-pointers from this library.
 */
enum MismatchStatus mismatch_analyze(const struct MismatchState *state,
                                     const struct MismatchPure *ideal,
                                     struct MismatchReport *out);

/**
 * Trace distance of the n-fold distilled state to the ideal projector,
 * written to `out`.
 *
 * # Safety
 * All pointers must be valid handles/out-pointers from this library.
 */
enum MismatchStatus mismatch_distilled_trace_distance(const struct MismatchState *state,
                                                      const struct MismatchPure *ideal,
                                                      uint32_t n,
                                                      double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MISMATCH_FFI_H */
