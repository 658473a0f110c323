#ifndef MANIFOLD_VOLUMES_H
#define MANIFOLD_VOLUMES_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MvMethod {
  MV_METHOD_QUADRATURE = 0,
  MV_METHOD_MONTE_CARLO = 1,
} MvMethod;

/**
 * Result code of every fallible call.
 */
typedef enum MvStatus {
  MV_STATUS_OK = 0,
  MV_STATUS_NULL_POINTER = 1,
  MV_STATUS_INVALID_ARGUMENT = 2,
  MV_STATUS_INVALID_UTF8 = 3,
  MV_STATUS_DIVIDE_BY_ZERO = 4,
  MV_STATUS_UNSUPPORTED = 5,
  MV_STATUS_BUFFER_TOO_SMALL = 6,
  MV_STATUS_INTERNAL = 7,
  MV_STATUS_PANIC = 8,
} MvStatus;

/**
 * Opaque exact volume `(p/q)·√m·π^k`.
 */
typedef struct MvVolume MvVolume;

typedef struct MvIntegrationResult {
  double estimate;
  /**
   * Zero for quadrature.
   */
  double std_error;
  uint64_t evaluations;
  enum MvMethod method;
} MvIntegrationResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Exact volume of `family` (`"sphere"`, `"cp"`, `"su"`, `"flag"`, …) with
 * integer parameters `params[0..n_params]`.
 *
 * # Safety
 * `family` must be a NUL-terminated string, `params` must point to
 * `n_params` values (or be null when `n_params` is 0), `out` must be writable.
 */
enum MvStatus mv_volume(const char *family,
                        const uint32_t *params,
                        size_t n_params,
                        struct MvVolume **out);

/**
 * As [`mv_volume`], with the scale `ξ = xi_num/xi_den` used by `g2` and `f4`.
 *
 * # Safety
 * Same as [`mv_volume`].
 */
enum MvStatus mv_volume_with_xi(const char *family,
                                const uint32_t *params,
                                size_t n_params,
                                int64_t xi_num,
                                int64_t xi_den,
                                struct MvVolume **out);

/**
 * Parses the text form, e.g. `"(1/3)·√2·π^9"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum MvStatus mv_volume_parse(const char *text, struct MvVolume **out);

/**
 * Reads a JSON record with integer fields `num`, `den`, `radicand`, `pi_pow`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum MvStatus mv_volume_from_json(const char *json, struct MvVolume **out);

/**
 * # Safety
 * `v` must be a live handle; `out` writable.
 */
enum MvStatus mv_volume_clone(const struct MvVolume *v, struct MvVolume **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `v` must be null or a handle not yet freed.
 */
void mv_volume_free(struct MvVolume *v);

/**
 * # Safety
 * `v` must be a live handle; `out` writable.
 */
enum MvStatus mv_volume_approx(const struct MvVolume *v, double *out);

/**
 * Exponent `k` of π.
 *
 * # Safety
 * `v` must be a live handle; `out` writable.
 */
enum MvStatus mv_volume_pi_pow(const struct MvVolume *v, uint32_t *out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` writable.
 */
enum MvStatus mv_volume_equal(const struct MvVolume *a, const struct MvVolume *b, bool *out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` writable.
 */
enum MvStatus mv_volume_mul(const struct MvVolume *a,
                            const struct MvVolume *b,
                            struct MvVolume **out);

/**
 * `a / b`; fails with `DivideByZero` for `b = 0` and `InvalidArgument`
 * when the π exponent would become negative.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` writable.
 */
enum MvStatus mv_volume_div(const struct MvVolume *a,
                            const struct MvVolume *b,
                            struct MvVolume **out);

/**
 * Canonical text form (UTF-8).
 *
 * # Safety
 * `v` must be a live handle; `buf` must hold `len` bytes (may be null when
 * `len` is 0); `written` may be null.
 */
enum MvStatus mv_volume_render(const struct MvVolume *v, char *buf, size_t len, size_t *written);

/**
 * JSON record `{"num","den","radicand","pi_pow","approx"}`.
 *
 * # Safety
 * As [`mv_volume_render`].
 */
enum MvStatus mv_volume_to_json(const struct MvVolume *v, char *buf, size_t len, size_t *written);

/**
 * Weinstein integer of `rp`, `cp`, `hp` or `op` in dimension `n`, as a
 * decimal string.
 *
 * # Safety
 * `family` must be a NUL-terminated string; buffer rules as in
 * [`mv_volume_render`].
 */
enum MvStatus mv_weinstein_integer(const char *family,
                                   uint32_t n,
                                   char *buf,
                                   size_t len,
                                   size_t *written);

/**
 * Integrates a named chart (`"su2-euler"`, `"su3"`, `"sphere-4"`, …).
 * `order` is used by quadrature; `samples`, `seed`, `chunks` by Monte Carlo.
 *
 * # Safety
 * `chart` must be a NUL-terminated string and `out` writable.
 */
enum MvStatus mv_integrate_chart(const char *chart,
                                 enum MvMethod method,
                                 uint32_t order,
                                 uint64_t samples,
                                 uint64_t seed,
                                 uint64_t chunks,
                                 struct MvIntegrationResult *out);

/**
 * Exact volume that the named chart integrates to.
 *
 * # Safety
 * `chart` must be a NUL-terminated string and `out` writable.
 */
enum MvStatus mv_chart_exact_volume(const char *chart, struct MvVolume **out);

/**
 * `n² − Σ q_i²` for a partition `parts[0..n_parts]` of `n`.
 *
 * # Safety
 * `parts` must point to `n_parts` values; `out` writable.
 */
enum MvStatus mv_orbit_dimension(uint32_t n, const uint32_t *parts, size_t n_parts, uint32_t *out);

/**
 * Positivity of the diagonal qutrit state with Bloch coordinates `(x3, x8)`.
 */
bool mv_su3_positivity(double x3, double x8);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *mv_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *mv_status_name(enum MvStatus status);

/**
 * Library version, static string.
 */
const char *mv_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MANIFOLD_VOLUMES_H */
