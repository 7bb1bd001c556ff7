#ifndef LA_NODAL_H
#define LA_NODAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum LaStatus {
  LA_STATUS_OK = 0,
  LA_STATUS_NULL_POINTER = 1,
  LA_STATUS_INVALID_ARGUMENT = 2,
  LA_STATUS_WRONG_PARITY = 3,
  /**
   * The point is outside the domain or is not a zero of the field.
   */
  LA_STATUS_DOMAIN = 4,
  /**
   * A computation did not converge or produced no usable value.
   */
  LA_STATUS_NUMERICAL = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  LA_STATUS_INTERNAL = 6,
} LaStatus;

/**
 * Planar families accepted by [`la_field_planar`].
 */
typedef enum LaFamily {
  LA_FAMILY_EVEN = 0,
  LA_FAMILY_ODD = 1,
  /**
   * Even for even degree, odd for odd degree.
   */
  LA_FAMILY_PLANAR = 2,
} LaFamily;

/**
 * Stratum codes reported by [`la_classify`].
 */
typedef enum LaStratum {
  LA_STRATUM_REGULAR_ORTHOGONAL = 0,
  LA_STRATUM_REGULAR_TANGENTIAL = 1,
  LA_STRATUM_GAMMA_STAR = 2,
  LA_STRATUM_GAMMA_A = 3,
  LA_STRATUM_REGULAR = 4,
  LA_STRATUM_INTERIOR_SINGULAR = 5,
} LaStratum;

/**
 * Parity codes; `LA_PARITY_NONE` off `Σ`.
 */
typedef enum LaParity {
  LA_PARITY_NONE = 0,
  LA_PARITY_SYMMETRIC = 1,
  LA_PARITY_ANTISYMMETRIC = 2,
  LA_PARITY_MIXED = 3,
} LaParity;

/**
 * Opaque field on `R^{n+1}`.
 */
typedef struct LaField LaField;

/**
 * Classification of one nodal point.
 */
typedef struct LaClassification {
  double k_raw;
  double k_snapped;
  enum LaStratum stratum;
  enum LaParity parity;
  /**
   * `-1` when not defined (regular points off `Σ`).
   */
  int32_t spine_dim;
  /**
   * Residual of the tangent-map fit.
   */
  double residual;
} LaClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *la_version(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *la_last_error(void);

/**
 * Homogeneous planar solution of degree `k` for `a = a_num / a_den`.
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum LaStatus la_field_planar(enum LaFamily family,
                              uint32_t k,
                              int64_t a_num,
                              int64_t a_den,
                              struct LaField **out);

/**
 * Extension of the monomial `x^α` on `Σ = R^n` (`n = len`) to a solution.
 *
 * # Safety
 * `alpha` must point to `len` values and `out` must be valid for one pointer write.
 */
enum LaStatus la_field_extension(const uint32_t *alpha,
                                 size_t len,
                                 int64_t a_num,
                                 int64_t a_den,
                                 struct LaField **out);

/**
 * `v · y|y|^{-a}` where `v` is the planar solution of degree `k` for the
 * conjugate weight `2 - a`; it vanishes on `Σ` and solves the equation for `a`.
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum LaStatus la_field_antisymmetric(uint32_t k,
                                     int64_t a_num,
                                     int64_t a_den,
                                     struct LaField **out);

/**
 * `c_f f + c_g g` for two fields with the same dimension and weight.
 *
 * # Safety
 * `f` and `g` must be live handles and `out` valid for one pointer write.
 */
enum LaStatus la_field_combine(double c_f,
                               const struct LaField *f,
                               double c_g,
                               const struct LaField *g,
                               struct LaField **out);

/**
 * Grid solution of the Dirichlet problem on `[-L, L]^n × [0, H]` with data
 * taken from `data`, which must be even or odd in `y`.
 *
 * # Safety
 * `data` must be a live handle and `out` valid for one pointer write.
 */
enum LaStatus la_solve(const struct LaField *data,
                       size_t nx,
                       double half_width,
                       double height,
                       double tol,
                       struct LaField **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `f` must come from this library and not be used afterwards.
 */
void la_field_free(struct LaField *f);

/**
 * Dimension `n` of `Σ`; the field lives on `R^{n+1}`. Returns 0 for null.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
size_t la_field_dim(const struct LaField *f);

/**
 * Value at `point` (`n + 1` coordinates).
 *
 * # Safety
 * `point` must hold `n + 1` values and `out` be valid for one write.
 */
enum LaStatus la_field_value(const struct LaField *f, const double *point, double *out);

/**
 * Almgren frequency `N(center, r)` at each of `count` radii, written to `out_n`
 * in the order of `radii`.
 *
 * # Safety
 * `center` must hold `n + 1` values; `radii` and `out_n` must hold `count`.
 */
enum LaStatus la_frequency(const struct LaField *f,
                           const double *center,
                           const double *radii,
                           size_t count,
                           double *out_n);

/**
 * Vanishing order at a nodal point: the extrapolated frequency limit and
 * its snapped value (`NAN` when no admissible order is close).
 *
 * # Safety
 * `center` must hold `n + 1` values; the outputs must be valid for one write.
 */
enum LaStatus la_vanishing_order(const struct LaField *f,
                                 const double *center,
                                 double *k_raw,
                                 double *k_snapped);

/**
 * Order, tangent parity, stratum and spine dimension at a nodal point.
 *
 * # Safety
 * `center` must hold `n + 1` values and `out` be valid for one write.
 */
enum LaStatus la_classify(const struct LaField *f,
                          const double *center,
                          struct LaClassification *out);

/**
 * Length of the nodal set in the disk of `radius` about the origin of the
 * plane, by box counting on a `cells × cells` sample grid (`n = 1` only).
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum LaStatus la_nodal_length(const struct LaField *f, double radius, size_t cells, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LA_NODAL_H */
