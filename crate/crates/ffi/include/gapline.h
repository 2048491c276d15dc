#ifndef GAPLINE_H
#define GAPLINE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GaplineStatus {
  GAPLINE_STATUS_OK = 0,
  GAPLINE_STATUS_NULL_ARGUMENT = 1,
  GAPLINE_STATUS_INVALID_ARGUMENT = 2,
  GAPLINE_STATUS_NUMERICAL = 3,
  GAPLINE_STATUS_IO = 4,
  GAPLINE_STATUS_BUFFER_TOO_SMALL = 5,
  GAPLINE_STATUS_PANIC = 6,
} GaplineStatus;

/**
 * Opaque bound curve over `k = 0..=kmax`.
 */
typedef struct GaplineBoundCurve GaplineBoundCurve;

/**
 * Opaque banded symmetric matrix.
 */
typedef struct GaplineMatrix GaplineMatrix;

/**
 * Spectral inclusion `[-b1, -a] ∪ [a, b2]` plus evaluation settings.
 */
typedef struct GaplineBoundSpec {
  double a;
  double b1;
  double b2;
  size_t m;
  size_t kmax;
  /**
   * Quadrature tolerance; 0 selects the library default.
   */
  double tol;
  /**
   * 0 for the derived K2 constant, 1 for the printed one.
   */
  int32_t k2_printed;
} GaplineBoundSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gapline_version(void);

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *gapline_last_error(void);

/**
 * Builds an `m`-banded matrix with the `n` given eigenvalues from `seed`.
 *
 * # Safety
 * `eigenvalues` must point to `n` doubles; `out` must be writable.
 */
enum GaplineStatus gapline_matrix_generate(const double *eigenvalues,
                                           size_t n,
                                           size_t m,
                                           uint64_t seed,
                                           struct GaplineMatrix **out);

/**
 * Reads a matrix file and its companions when present.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum GaplineStatus gapline_matrix_load(const char *path, struct GaplineMatrix **out);

/**
 * Writes the matrix file and, for generated matrices, its companions.
 *
 * # Safety
 * `matrix` must come from this library; `path` must be NUL-terminated.
 */
enum GaplineStatus gapline_matrix_save(const struct GaplineMatrix *matrix, const char *path);

/**
 * # Safety
 * `matrix` must be NULL or come from this library, and not be used afterwards.
 */
void gapline_matrix_free(struct GaplineMatrix *matrix);

/**
 * Order of the matrix, 0 for NULL.
 *
 * # Safety
 * `matrix` must be NULL or come from this library.
 */
size_t gapline_matrix_dim(const struct GaplineMatrix *matrix);

/**
 * Declared bandwidth, 0 for NULL.
 *
 * # Safety
 * `matrix` must be NULL or come from this library.
 */
size_t gapline_matrix_bandwidth(const struct GaplineMatrix *matrix);

/**
 * Copies the entries in row-major order into `buf` (at least `n * n` values).
 *
 * # Safety
 * `buf` must point to `len` writable doubles.
 */
enum GaplineStatus gapline_matrix_copy_entries(const struct GaplineMatrix *matrix,
                                               double *buf,
                                               size_t len);

/**
 * Decay profile `D(k)`, `k = 0..n-1`, of the projector onto eigenvalues below `mu`.
 *
 * # Safety
 * `buf` must point to `len >= n` writable doubles.
 */
enum GaplineStatus gapline_projector_decay(const struct GaplineMatrix *matrix,
                                           double mu,
                                           double *buf,
                                           size_t len);

/**
 * Evaluates one bound family (`"b1"`, `"b2"`, `"b3"`, `"quad"`, `"sl"`,
 * `"hasson"`, `"fuchs"`, `"demko"`, `"frommer"`, `"refined"`) for
 * `k = 0..=spec.kmax`. `eigenvalues` (normalized, may be NULL when
 * `n_eigs == 0`) is required by the spectrum-aware and inverse families.
 *
 * # Safety
 * `family` must be NUL-terminated; `eigenvalues` must point to `n_eigs`
 * doubles; `out` must be writable.
 */
enum GaplineStatus gapline_bound_curve(const struct GaplineBoundSpec *spec,
                                       const char *family,
                                       const double *eigenvalues,
                                       size_t n_eigs,
                                       struct GaplineBoundCurve **out);

/**
 * Number of points, 0 for NULL.
 *
 * # Safety
 * `curve` must be NULL or come from this library.
 */
size_t gapline_curve_len(const struct GaplineBoundCurve *curve);

/**
 * Copies the raw and capped values and the optimizer parameter (NaN where
 * none) into caller buffers of at least `gapline_curve_len` values. Any of
 * the three buffers may be NULL to skip it.
 *
 * # Safety
 * Non-NULL buffers must point to `len` writable doubles.
 */
enum GaplineStatus gapline_curve_values(const struct GaplineBoundCurve *curve,
                                        double *raw,
                                        double *capped,
                                        double *param,
                                        size_t len);

/**
 * # Safety
 * `curve` must be NULL or come from this library, and not be used afterwards.
 */
void gapline_curve_free(struct GaplineBoundCurve *curve);

/**
 * Smallest `k` with `values[j] <= eps` for every `j >= k`.
 *
 * # Safety
 * `values` must point to `len` doubles; `out` must be writable.
 */
enum GaplineStatus gapline_first_below(const double *values, size_t len, double eps, size_t *out);

/**
 * Smallest bandwidth `w` with `values[k] <= eps` for every `k > w`.
 *
 * # Safety
 * `values` must point to `len` doubles; `out` must be writable.
 */
enum GaplineStatus gapline_truncation_bandwidth(const double *values,
                                                size_t len,
                                                double eps,
                                                size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAPLINE_H */
