#ifndef SPINLAB_H
#define SPINLAB_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SpinlabBoundary {
  SPINLAB_BOUNDARY_OPEN = 0,
  SPINLAB_BOUNDARY_PERIODIC = 1,
} SpinlabBoundary;

typedef enum SpinlabDeltaSign {
  SPINLAB_DELTA_SIGN_PLUS = 0,
  SPINLAB_DELTA_SIGN_MINUS = 1,
} SpinlabDeltaSign;

typedef enum SpinlabKind {
  SPINLAB_KIND_XXZ_DM = 0,
  SPINLAB_KIND_ISING_DM = 1,
  SPINLAB_KIND_ISING_DM_FIELD = 2,
} SpinlabKind;

typedef enum SpinlabStatus {
  SPINLAB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SPINLAB_STATUS_NULL_POINTER = 1,
  /**
   * Invalid argument or model.
   */
  SPINLAB_STATUS_CONTRACT = 2,
  /**
   * Numerical failure.
   */
  SPINLAB_STATUS_NUMERIC = 3,
  /**
   * Requested Hilbert space exceeds the dimension cap.
   */
  SPINLAB_STATUS_DIMENSION = 4,
  /**
   * Malformed text input.
   */
  SPINLAB_STATUS_PARSE = 5,
  /**
   * Caller-supplied buffer is too small; the required length was written.
   */
  SPINLAB_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * Internal panic caught at the boundary.
   */
  SPINLAB_STATUS_PANIC = 7,
} SpinlabStatus;

/**
 * Opaque model handle.
 */
typedef struct SpinlabModel SpinlabModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a 3-site open chain. `kind` is a `SpinlabKind` value. Unused
 * parameters must be 0: `delta` for the Ising kinds, `h` for all but
 * `IsingDmField`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum SpinlabStatus spinlab_model_new(uint32_t kind,
                                     double j,
                                     double delta,
                                     double d,
                                     double h,
                                     struct SpinlabModel **out);

/**
 * Create a model from `key=value` lines (`#` comments) over the defaults.
 *
 * # Safety
 * `config` must be a NUL-terminated string; `out` must be writable.
 */
enum SpinlabStatus spinlab_model_from_config(const char *config, struct SpinlabModel **out);

/**
 * Change the geometry of an existing model. `boundary` and `delta_sign`
 * take `SpinlabBoundary` and `SpinlabDeltaSign` values. On error the model
 * is unchanged.
 *
 * # Safety
 * `model` must be a live handle.
 */
enum SpinlabStatus spinlab_model_set_geometry(struct SpinlabModel *model,
                                              size_t n,
                                              uint32_t boundary,
                                              uint32_t delta_sign);

/**
 * Number of sites of the model, or 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t spinlab_model_sites(const struct SpinlabModel *model);

/**
 * Release a model. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void spinlab_model_free(struct SpinlabModel *model);

/**
 * Concurrence of sites `i`, `j` (1-based) at temperature `t` (0: ground manifold).
 * If `lambdas` is non-null, the four square-root eigenvalues of `R` are
 * written there in descending order.
 *
 * # Safety
 * `model` must be a live handle, `value` writable, `lambdas` null or
 * writable for 4 doubles.
 */
enum SpinlabStatus spinlab_concurrence(const struct SpinlabModel *model,
                                       double t,
                                       size_t i,
                                       size_t j,
                                       double *value,
                                       double *lambdas);

/**
 * Energy levels in ascending order. `*len` is set to the number of levels;
 * if `capacity` is smaller nothing is written to `energies` and
 * `BufferTooSmall` is returned.
 *
 * # Safety
 * `model` must be a live handle, `len` writable, `energies` writable for
 * `capacity` doubles (may be null when `capacity` is 0).
 */
enum SpinlabStatus spinlab_spectrum(const struct SpinlabModel *model,
                                    double *energies,
                                    size_t capacity,
                                    size_t *len);

/**
 * Natural log of the partition function at `t > 0`.
 *
 * # Safety
 * `model` must be a live handle and `ln_z` writable.
 */
enum SpinlabStatus spinlab_log_partition_function(const struct SpinlabModel *model,
                                                  double t,
                                                  double *ln_z);

/**
 * Temperature above which the concurrence of `(i, j)` vanishes. `*found`
 * is false (and `*tc` untouched) when the pair is never entangled.
 *
 * # Safety
 * `model` must be a live handle; `tc` and `found` writable.
 */
enum SpinlabStatus spinlab_critical_temperature(const struct SpinlabModel *model,
                                                size_t i,
                                                size_t j,
                                                double t_hi,
                                                double *tc,
                                                bool *found);

/**
 * CSV data for a preset figure (e.g. "fig1"). The string must be released
 * with `spinlab_string_free`.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `csv` writable.
 */
enum SpinlabStatus spinlab_figure_csv(const char *id, char **csv);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void spinlab_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or "" after a
 * success. Valid until the next library call on the same thread.
 */
const char *spinlab_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *spinlab_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINLAB_H */
