#ifndef SPHEREKERNEL_H
#define SPHEREKERNEL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_POINTER = 1,
  SK_STATUS_INVALID_ARGUMENT = 2,
  SK_STATUS_DIVERGENT_SERIES = 3,
  SK_STATUS_UNSUPPORTED_RANGE = 4,
  SK_STATUS_TOLERANCE_UNREACHABLE = 5,
  SK_STATUS_DIMENSION_MISMATCH = 6,
  SK_STATUS_BUFFER_TOO_SMALL = 7,
  SK_STATUS_PANIC = 8,
} SkStatus;

/**
 * Derivative coefficient table handle.
 */
typedef struct SkBTable SkBTable;

/**
 * Coefficient model handle.
 */
typedef struct SkModel SkModel;

/**
 * Outcome of a smoothness classification. `unbounded` is nonzero when every
 * even derivative exists, in which case `max_ell` is zero.
 */
typedef struct SkSmoothness {
  uint32_t max_ell;
  uint8_t unbounded;
} SkSmoothness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON model such as `{"variant":"geometric","c":0.5,"r":0.5}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SkStatus sk_model_from_json(const char *json, struct SkModel **out);

/**
 * # Safety
 * `model` must come from [`sk_model_from_json`] and not be used afterwards.
 */
void sk_model_free(struct SkModel *model);

/**
 * Kernel value on the Hilbert sphere at angle `theta`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SkStatus sk_phi_eval_inf(const struct SkModel *model, double theta, double tol, double *out);

/**
 * Kernel value on `S^d` with the model read as Gegenbauer coefficients.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SkStatus sk_phi_eval_d(const struct SkModel *model,
                            uint32_t d,
                            double theta,
                            double tol,
                            double *out);

/**
 * `phi^(2l)(0)` on the Hilbert sphere.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SkStatus sk_derivative_at_zero(const struct SkModel *model,
                                    uint32_t ell,
                                    double tol,
                                    double *out);

/**
 * Classifies smoothness: `d == 0` reads cosine-power coefficients on the
 * Hilbert sphere, `d > 0` reads Gegenbauer coefficients on `S^d`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SkStatus sk_classify(const struct SkModel *model,
                          uint32_t d,
                          uint32_t ell_max_probe,
                          struct SkSmoothness *out);

/**
 * Circle coefficients `a_{0,1}, ..., a_{len-1,1}` written into `values`.
 *
 * # Safety
 * `values` must point to `len` writable doubles.
 */
enum SkStatus sk_transform(const struct SkModel *model, double tol, double *values, size_t len);

/**
 * Builds the exact table for `cos^j` up to derivative order `max_order`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SkStatus sk_btable_new(uint64_t j, uint32_t max_order, struct SkBTable **out);

/**
 * # Safety
 * `table` must come from [`sk_btable_new`] and not be used afterwards.
 */
void sk_btable_free(struct SkBTable *table);

/**
 * Writes cell `(n1, n2)` as a NUL-terminated decimal string.
 *
 * `needed` receives the string length without the terminator, also when
 * the buffer is too small, so callers can size a second attempt.
 *
 * # Safety
 * `buf` must point to `len` writable bytes; `needed` may be null.
 */
enum SkStatus sk_btable_cell(const struct SkBTable *table,
                             uint32_t n1,
                             uint32_t n2,
                             char *buf,
                             size_t len,
                             size_t *needed);

/**
 * Copies the calling thread's last error message into `buf` (truncated to
 * fit) and returns its full length.
 *
 * # Safety
 * `buf` must point to `len` writable bytes or be null with `len == 0`.
 */
size_t sk_last_error_message(char *buf, size_t len);

/**
 * Static name of a status code, e.g. `"DivergentSeries"`.
 */
const char *sk_status_name(enum SkStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHEREKERNEL_H */
