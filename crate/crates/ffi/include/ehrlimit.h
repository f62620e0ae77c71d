#ifndef EHRLIMIT_H
#define EHRLIMIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call. Values 1 to 5 match the command-line exit codes.
 */
typedef enum EhrStatus {
  EHR_STATUS_OK = 0,
  EHR_STATUS_CHECK_FAILED = 1,
  EHR_STATUS_INVALID_ARGUMENT = 2,
  EHR_STATUS_UNSUPPORTED_FORM = 3,
  EHR_STATUS_NOT_STABLE = 4,
  EHR_STATUS_BUDGET_EXCEEDED = 5,
  EHR_STATUS_NULL_POINTER = 10,
  EHR_STATUS_OVERFLOW = 11,
  EHR_STATUS_PANIC = 12,
} EhrStatus;

typedef enum EhrLimitMode {
  EHR_LIMIT_MODE_CERTIFIED = 0,
  EHR_LIMIT_MODE_EMPIRICAL = 1,
} EhrLimitMode;

/**
 * Opaque integer polynomial.
 */
typedef struct EhrPolynomial EhrPolynomial;

/**
 * Opaque lattice simplex.
 */
typedef struct EhrSimplex EhrSimplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a simplex from `n_vertices` points of `ambient_dim` coordinates,
 * stored row after row in `coords`. Passing `ambient_dim` points makes the
 * origin an implicit extra vertex.
 *
 * # Safety
 * `coords` must point to `n_vertices * ambient_dim` readable values and
 * `out` must be a valid pointer.
 */
enum EhrStatus ehr_simplex_from_vertices(const int64_t *coords,
                                         size_t n_vertices,
                                         size_t ambient_dim,
                                         struct EhrSimplex **out);

/**
 * Builds a named simplex from JSON such as `{"kind":"bidiagonal","m":2,"d":14}`.
 *
 * Kinds: `standard_reflexive {d}`, `weighted {q}`, `q_of_n {n}`,
 * `bidiagonal {m, d}`, `multidiagonal {a, d}`.
 *
 * # Safety
 * `spec_json` must be a nul-terminated string and `out` a valid pointer.
 */
enum EhrStatus ehr_simplex_from_family(const char *spec_json, struct EhrSimplex **out);

/**
 * Parses a simplex file body: JSON `{"vertices": ...}` or a whitespace
 * matrix whose columns are vertices.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum EhrStatus ehr_simplex_parse(const char *text, struct EhrSimplex **out);

/**
 * Dimension of the simplex, or 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t ehr_simplex_dim(const struct EhrSimplex *s);

/**
 * Normalized volume as a decimal string.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum EhrStatus ehr_simplex_volume(const struct EhrSimplex *s, char **out);

/**
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void ehr_simplex_free(struct EhrSimplex *s);

/**
 * h*-polynomial of the simplex.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum EhrStatus ehr_hstar(const struct EhrSimplex *s, struct EhrPolynomial **out);

/**
 * Number of stored coefficients (degree plus one; 0 for the zero polynomial).
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t ehr_polynomial_len(const struct EhrPolynomial *p);

/**
 * Coefficient of `z^index`; fails with `Overflow` if it does not fit.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum EhrStatus ehr_polynomial_coeff_u64(const struct EhrPolynomial *p, size_t index, uint64_t *out);

/**
 * Coefficient of `z^index` as a decimal string.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum EhrStatus ehr_polynomial_coeff_string(const struct EhrPolynomial *p, size_t index, char **out);

/**
 * # Safety
 * `p` must be null or a handle not yet freed.
 */
void ehr_polynomial_free(struct EhrPolynomial *p);

/**
 * Limit prefix through degree `degree` for a family given as JSON, e.g.
 * `{"kind":"bidiagonal","m":2}`; writes the report JSON to `out`.
 *
 * `window` and `d_max` apply to empirical mode. A report that did not
 * stabilize is still written and the call returns `NotStable`.
 *
 * # Safety
 * `family_json` must be a nul-terminated string and `out` a valid pointer.
 */
enum EhrStatus ehr_limit(const char *family_json,
                         size_t degree,
                         enum EhrLimitMode mode,
                         size_t window,
                         size_t d_max,
                         uint64_t budget,
                         char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void ehr_string_free(char *s);

/**
 * Message for the most recent failed call on this thread, or null.
 * The pointer stays valid until the next call into this library.
 */
const char *ehr_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EHRLIMIT_H */
