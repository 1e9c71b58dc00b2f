#ifndef IMPLICIT_SERIES_H
#define IMPLICIT_SERIES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum IsStatus {
  IS_STATUS_OK = 0,
  IS_STATUS_NULL_POINTER = 1,
  IS_STATUS_INVALID_UTF8 = 2,
  IS_STATUS_SYNTAX = 3,
  IS_STATUS_UNKNOWN_IDENTIFIER = 4,
  IS_STATUS_DOMAIN = 5,
  IS_STATUS_CONDITION = 6,
  IS_STATUS_SINGULAR = 7,
  IS_STATUS_RANGE = 8,
  IS_STATUS_STRUCTURAL = 9,
  IS_STATUS_RESOURCE = 10,
  IS_STATUS_CONVERGENCE = 11,
  IS_STATUS_NUMERICAL_SINGULARITY = 12,
  IS_STATUS_PRECONDITION = 13,
  IS_STATUS_FORMAT = 14,
  IS_STATUS_INVARIANT = 15,
  IS_STATUS_USAGE = 16,
  IS_STATUS_PANIC = 17,
} IsStatus;

typedef enum IsVariant {
  IS_VARIANT_FINITE = 0,
  IS_VARIANT_INTEGER = 1,
  IS_VARIANT_CONTRACTION = 2,
  IS_VARIANT_RECURRENCE = 3,
} IsVariant;

/**
 * A series in `z` and the w-variables.
 */
typedef struct IsSeries IsSeries;

/**
 * A series in the w-variables alone.
 */
typedef struct IsWSeries IsWSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *is_last_error_message(void);

/**
 * Stable short name of a status, e.g. `"domain"`. Never NULL.
 */
const char *is_status_name(enum IsStatus status);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void is_string_free(char *s);

/**
 * Parses `text` as a series in `z` and the comma-separated variables
 * `vars` (NULL means `"w"`), truncated at `(z_order, w_order)`.
 *
 * # Safety
 * `text` and `vars` must be NUL-terminated strings or NULL; `out` must be
 * writable.
 */
enum IsStatus is_series_parse(const char *text,
                              const char *vars,
                              uint32_t z_order,
                              uint32_t w_order,
                              struct IsSeries **out);

/**
 * # Safety
 * `s` must be NULL or a handle from this library, not yet freed.
 */
void is_series_free(struct IsSeries *s);

/**
 * # Safety
 * `s` must be NULL or a handle from this library, not yet freed.
 */
void is_wseries_free(struct IsWSeries *s);

/**
 * Solves `z = G(z, w)` to the w-order of `g`. With a non-NULL `h` the
 * result is `H(φ(w), w)` instead of `φ`.
 *
 * # Safety
 * `g` must be a valid handle, `h` a valid handle or NULL, `out` writable.
 */
enum IsStatus is_solve(const struct IsSeries *g,
                       enum IsVariant variant,
                       bool normalize,
                       const struct IsSeries *h,
                       struct IsWSeries **out);

/**
 * `f^{-1}(w)` to `order` for a series `f` in `z` alone.
 *
 * # Safety
 * `f` must be a valid handle and `out` writable.
 */
enum IsStatus is_invert(const struct IsSeries *f, uint32_t order, struct IsWSeries **out);

/**
 * `−1 − x₀(w)` for the lattice-gas root, to `order`.
 *
 * # Safety
 * `out` must be writable.
 */
enum IsStatus is_sokal_x0(uint32_t order, struct IsWSeries **out);

/**
 * Number of w-variables of a series.
 *
 * # Safety
 * `s` must be a valid handle.
 */
size_t is_wseries_nvars(const struct IsWSeries *s);

/**
 * Truncation order of a series.
 *
 * # Safety
 * `s` must be a valid handle.
 */
uint32_t is_wseries_order(const struct IsWSeries *s);

/**
 * The coefficient of `w^alpha` as `"num/den"`.
 *
 * # Safety
 * `s` must be a valid handle, `alpha` must point to `len` exponents, and
 * `out` must be writable.
 */
enum IsStatus is_wseries_coeff(const struct IsWSeries *s,
                               const uint32_t *alpha,
                               size_t len,
                               char **out);

/**
 * The coefficient of `w^alpha` rounded to a double.
 *
 * # Safety
 * As for [`is_wseries_coeff`], with `out` pointing to a double.
 */
enum IsStatus is_wseries_coeff_f64(const struct IsWSeries *s,
                                   const uint32_t *alpha,
                                   size_t len,
                                   double *out);

/**
 * Canonical text form, one `w^[α] z^0 : num/den` line per nonzero term.
 *
 * # Safety
 * `s` must be a valid handle and `out` writable.
 */
enum IsStatus is_wseries_to_text(const struct IsWSeries *s, char **out);

/**
 * Number of plane forests with `ell` trees and `k[n]` vertices of
 * out-degree `n`, as a decimal string ("0" for inadmissible types).
 *
 * # Safety
 * `k` must point to `len` counts and `out` must be writable.
 */
enum IsStatus is_universal_coeff(uint32_t ell, const uint32_t *k, size_t len, char **out);

/**
 * Iterates `z ← G(z, w)` from 0 at the point `w = w_re + i·w_im`
 * (one entry per w-variable), after checking the contraction condition on
 * an automatically chosen circle.
 *
 * # Safety
 * `g` must be a valid handle, `w_re`/`w_im` must point to `n` doubles and
 * `out_re`/`out_im` must be writable.
 */
enum IsStatus is_analytic_fixed_point(const struct IsSeries *g,
                                      const double *w_re,
                                      const double *w_im,
                                      size_t n,
                                      double *out_re,
                                      double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IMPLICIT_SERIES_H */
