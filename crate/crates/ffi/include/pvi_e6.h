#ifndef PVI_E6_H
#define PVI_E6_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PviStatus {
  PVI_STATUS_OK = 0,
  PVI_STATUS_NULL_POINTER = 1,
  PVI_STATUS_INVALID_ARGUMENT = 2,
  PVI_STATUS_PARSE = 3,
  PVI_STATUS_SINGULAR = 4,
  PVI_STATUS_INTEGRATOR = 5,
  PVI_STATUS_CLAIM_FAILED = 6,
  PVI_STATUS_PANIC = 7,
} PviStatus;

/**
 * Phase point, independent variable and parameters in binary64.
 */
typedef struct PviState PviState;

typedef struct PviTrajectory PviTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Free with
 * [`pvi_string_free`].
 */
char *pvi_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void pvi_string_free(char *s);

/**
 * Writes the 7x7 generalized Cartan matrix row-major into `out`.
 *
 * # Safety
 * `out` must point to 49 writable `int64_t`.
 */
enum PviStatus pvi_cartan_matrix(int64_t *out);

/**
 * Creates a state from `q[3]`, `p[3]`, `s` and `alpha[7]`.
 *
 * # Safety
 * Array arguments must point to the stated number of doubles; `out` must be writable.
 */
enum PviStatus pvi_state_new(const double *q,
                             const double *p,
                             double s,
                             const double *alpha,
                             struct PviState **out);

/**
 * Parses `{"q": [...], "p": [...], "s": ..., "alpha": [...]}`; entries may be
 * numbers or `"num/den"` strings.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum PviStatus pvi_state_from_json(const char *json, struct PviState **out);

/**
 * # Safety
 * `state` must come from this library (or be null) and not be used afterwards.
 */
void pvi_state_free(struct PviState *state);

/**
 * Copies the state out. Any output pointer may be null to skip it.
 *
 * # Safety
 * Non-null outputs must hold 3, 3, 1 and 7 doubles respectively.
 */
enum PviStatus pvi_state_get(const struct PviState *state,
                             double *q,
                             double *p,
                             double *s,
                             double *alpha);

/**
 * JSON form of the state with numeric entries. Free with [`pvi_string_free`].
 *
 * # Safety
 * `state` must be a valid handle; `out` must be writable.
 */
enum PviStatus pvi_state_to_json(const struct PviState *state, char **out);

/**
 * Applies a comma-separated word (e.g. `"r1,pi2"`) in place. On a singular
 * step the state is left unchanged and the message names the step.
 *
 * # Safety
 * `state` must be a valid handle and `word` a NUL-terminated string.
 */
enum PviStatus pvi_state_apply_word(struct PviState *state, const char *word, double threshold);

/**
 * Exact-rational transform of a JSON state; the result uses `"num/den"`
 * strings. Free `out_json` with [`pvi_string_free`].
 *
 * # Safety
 * `word` and `state_json` must be NUL-terminated; `out_json` must be writable.
 */
enum PviStatus pvi_transform_exact_json(const char *word, const char *state_json, char **out_json);

/**
 * Value of the coupled Hamiltonian at the state.
 *
 * # Safety
 * `state` must be a valid handle; `out` must be writable.
 */
enum PviStatus pvi_hamiltonian(const struct PviState *state, double *out);

/**
 * `d/ds` of `(q1, p1, q2, p2, q3, p3)`.
 *
 * # Safety
 * `state` must be a valid handle; `out` must hold 6 doubles.
 */
enum PviStatus pvi_vector_field(const struct PviState *state, double *out);

/**
 * Integrates from the state to `s_end`. `max_steps == 0` selects the default.
 *
 * # Safety
 * `state` must be a valid handle; `out` must be writable.
 */
enum PviStatus pvi_integrate(const struct PviState *state,
                             double s_end,
                             double rtol,
                             double atol,
                             size_t max_steps,
                             struct PviTrajectory **out);

/**
 * Number of samples, or 0 for a null handle.
 *
 * # Safety
 * `traj` must be a valid handle or null.
 */
size_t pvi_trajectory_len(const struct PviTrajectory *traj);

/**
 * Copies sample `index` into `s` and `y[6]`.
 *
 * # Safety
 * `traj` must be a valid handle; `s` and `y` must be writable.
 */
enum PviStatus pvi_trajectory_sample(const struct PviTrajectory *traj,
                                     size_t index,
                                     double *s,
                                     double *y);

/**
 * CSV text with header `s,q1,p1,q2,p2,q3,p3`. Free with [`pvi_string_free`].
 *
 * # Safety
 * `traj` must be a valid handle; `out` must be writable.
 */
enum PviStatus pvi_trajectory_to_csv(const struct PviTrajectory *traj, char **out);

/**
 * # Safety
 * `traj` must come from this library (or be null) and not be used afterwards.
 */
void pvi_trajectory_free(struct PviTrajectory *traj);

/**
 * Runs a verification claim with exact arithmetic. The JSON report is
 * written to `out_json` whenever the claim ran; the status is
 * `PVI_STATUS_CLAIM_FAILED` when it did not pass.
 *
 * # Safety
 * `claim` must be NUL-terminated; `out_json` must be writable.
 */
enum PviStatus pvi_verify(const char *claim, size_t trials, uint64_t seed, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PVI_E6_H */
