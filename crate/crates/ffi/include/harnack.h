#ifndef HARNACK_H
#define HARNACK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every function in this library.
 */
typedef enum HkStatus {
  HK_STATUS_OK = 0,
  HK_STATUS_NULL_POINTER = 1,
  HK_STATUS_INVALID_ARGUMENT = 2,
  HK_STATUS_SINGULAR = 3,
  HK_STATUS_NOT_HERMITIAN = 4,
  HK_STATUS_NOT_UNITARY = 5,
  HK_STATUS_NOT_CONTRACTIVE = 6,
  HK_STATUS_NO_CONVERGENCE = 7,
  HK_STATUS_PARSE = 8,
  HK_STATUS_DOMAIN = 9,
  HK_STATUS_DIMENSION = 10,
  HK_STATUS_BUFFER_TOO_SMALL = 11,
  HK_STATUS_PANIC = 12,
} HkStatus;

/**
 * Square complex matrix owned by the library.
 */
typedef struct HkMatrix HkMatrix;

/**
 * Inequality tolerance and strict-contraction margin. Pass NULL wherever a
 * `const HkSettings *` is accepted to use the defaults (1e-9 and 1e-6).
 */
typedef struct HkSettings {
  double tol;
  double margin;
} HkSettings;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never NULL; do not free.
 */
const char *hk_status_message(enum HkStatus status);

/**
 * Message for the most recent call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *hk_last_error_message(void);

/**
 * Builds an `n`×`n` matrix from row-major real parts and optional
 * (nullable) imaginary parts, each of length `n*n`.
 *
 * # Safety
 * `re` (and `im` when non-NULL) must point to `n*n` readable doubles;
 * `out` must be writable.
 */
enum HkStatus hk_matrix_new(size_t n, const double *re, const double *im, struct HkMatrix **out);

/**
 * Parses the JSON matrix format `{"n":…, "re":[[…]], "im":[[…]]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HkStatus hk_matrix_from_json(const char *json, struct HkMatrix **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `m` must come from this library and not be used afterwards.
 */
void hk_matrix_free(struct HkMatrix *m);

/**
 * Dimension of the matrix, or 0 for NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t hk_matrix_dim(const struct HkMatrix *m);

/**
 * Copies entries row-major into `re` and, when non-NULL, `im`; both hold
 * `len` doubles.
 *
 * # Safety
 * Buffers must be writable for `len` doubles.
 */
enum HkStatus hk_matrix_entries(const struct HkMatrix *m, double *re, double *im, size_t len);

/**
 * Singular values in descending order into `out` (`len ≥ n`).
 *
 * # Safety
 * `out` must be writable for `len` doubles.
 */
enum HkStatus hk_singular_values(const struct HkMatrix *m, double *out, size_t len);

/**
 * Eigenvalues ordered by modulus, then real part, then imaginary part, all
 * descending.
 *
 * # Safety
 * `re` and `im` must be writable for `len` doubles.
 */
enum HkStatus hk_eigenvalues(const struct HkMatrix *m, double *re, double *im, size_t len);

/**
 * The Hermitian quotient `(I−A*)⁻¹(I−A*A)(I−A)⁻¹` as a new handle.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum HkStatus hk_harnack_quotient(const struct HkMatrix *m, struct HkMatrix **out);

/**
 * Upper and lower bounds on the product of the eigenvalues of the quotient
 * at the 1-based, strictly increasing `indices`, as JSON.
 *
 * # Safety
 * `indices` must hold `k` readable values; `out` must be writable. Free the
 * result with `hk_string_free`.
 */
enum HkStatus hk_bound_report_json(const struct HkMatrix *m,
                                   const size_t *indices,
                                   size_t k,
                                   const struct HkSettings *settings,
                                   char **out);

/**
 * Per-index slacks of the conjectured resolvent lower bound, as JSON.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum HkStatus hk_conjecture_slack_json(const struct HkMatrix *m,
                                       const struct HkSettings *settings,
                                       char **out);

/**
 * Runs a seeded counterexample search from a JSON configuration and writes
 * the JSON summary. A found violation is reported inside the summary
 * (`violation_found`), not as a status.
 *
 * # Safety
 * `config_json` must be NUL-terminated; `out` must be writable.
 */
enum HkStatus hk_search_json(const char *config_json, char **out);

/**
 * Re-evaluates the built-in worked examples; writes the JSON run report.
 *
 * # Safety
 * `out` must be writable.
 */
enum HkStatus hk_repro_paper_json(char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void hk_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARNACK_H */
