#ifndef DUALBENT_H
#define DUALBENT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DualbentStatus {
  DUALBENT_STATUS_OK = 0,
  DUALBENT_STATUS_NULL_POINTER = 1,
  DUALBENT_STATUS_INVALID_ARGUMENT = 2,
  DUALBENT_STATUS_BUDGET_EXCEEDED = 3,
  DUALBENT_STATUS_HYPOTHESIS_VIOLATED = 4,
  DUALBENT_STATUS_MISMATCH = 5,
  DUALBENT_STATUS_BUFFER_TOO_SMALL = 6,
  DUALBENT_STATUS_PANIC = 7,
} DualbentStatus;

/**
 * A linear code, with its predicted weights when it came from a build.
 */
typedef struct DualbentCode DualbentCode;

/**
 * GF(p^n) with its Conway modulus.
 */
typedef struct DualbentField DualbentField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static storage.
 */
const char *dualbent_version(void);

/**
 * Copies the last error message into `buf` (NUL-terminated, truncated to
 * `len`). Returns the full message length excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t dualbent_last_error(char *buf, size_t len);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum DualbentStatus dualbent_field_new(uint32_t p, uint32_t n, struct DualbentField **out);

/**
 * # Safety
 * `field` must come from [`dualbent_field_new`] and not be freed twice.
 */
void dualbent_field_free(struct DualbentField *field);

/**
 * # Safety
 * `field` must be a live handle.
 */
uint32_t dualbent_field_order(const struct DualbentField *field);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum DualbentStatus dualbent_field_add(const struct DualbentField *field,
                                       uint32_t a,
                                       uint32_t b,
                                       uint32_t *out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum DualbentStatus dualbent_field_mul(const struct DualbentField *field,
                                       uint32_t a,
                                       uint32_t b,
                                       uint32_t *out);

/**
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum DualbentStatus dualbent_field_div(const struct DualbentField *field,
                                       uint32_t a,
                                       uint32_t b,
                                       uint32_t *out);

/**
 * Builds a code from a bundled instance. `kind` is one of theorem1,
 * theorem2, corollary1, theorem3_S, theorem3_N, corollary2_S, corollary2_N;
 * theorem1 reads its subfield degree from `s1`.
 *
 * # Safety
 * `instance` and `kind` must be NUL-terminated strings, `out` valid.
 */
enum DualbentStatus dualbent_code_build(const char *instance,
                                        const char *kind,
                                        uint32_t s1,
                                        uint32_t s2,
                                        uint32_t lambda,
                                        struct DualbentCode **out);

/**
 * Parses a generator matrix in the "q n k" text format.
 *
 * # Safety
 * `matrix` must be a NUL-terminated string, `out` valid.
 */
enum DualbentStatus dualbent_code_from_matrix(const char *matrix, struct DualbentCode **out);

/**
 * # Safety
 * `code` must come from this library and not be freed twice.
 */
void dualbent_code_free(struct DualbentCode *code);

/**
 * # Safety
 * All pointers must be valid.
 */
enum DualbentStatus dualbent_code_params(const struct DualbentCode *code,
                                         uint64_t *q,
                                         uint64_t *n,
                                         uint32_t *k);

/**
 * Enumerates every codeword. Writes the distinct weights (zero included)
 * and their counts in ascending order, and their number to `len`. When
 * `capacity` is short only `len` is written. A zero `codeword_budget`
 * selects the default budget.
 *
 * # Safety
 * `weights` and `counts` must hold `capacity` entries; `code`, `len` valid.
 */
enum DualbentStatus dualbent_code_weight_distribution(const struct DualbentCode *code,
                                                      uint64_t codeword_budget,
                                                      uint64_t *weights,
                                                      uint64_t *counts,
                                                      size_t capacity,
                                                      size_t *len);

/**
 * Full analysis as a JSON string, to be released with
 * [`dualbent_string_free`].
 *
 * # Safety
 * `code` and `out` must be valid.
 */
enum DualbentStatus dualbent_code_report_json(const struct DualbentCode *code,
                                              uint64_t codeword_budget,
                                              char **out);

/**
 * Ok when the enumerated distribution equals the prediction, Mismatch
 * otherwise. Codes without a prediction are an invalid argument.
 *
 * # Safety
 * `code` must be valid.
 */
enum DualbentStatus dualbent_code_verify(const struct DualbentCode *code, uint64_t codeword_budget);

/**
 * Number of minimal access sets of the scheme on the dual code.
 *
 * # Safety
 * `code` and `out` must be valid.
 */
enum DualbentStatus dualbent_sss_minimal_access_sets(const struct DualbentCode *code,
                                                     uint64_t *out);

/**
 * Deals `secret` with the given seed and recovers it from all shares.
 *
 * # Safety
 * `code` and `recovered` must be valid.
 */
enum DualbentStatus dualbent_sss_round_trip(const struct DualbentCode *code,
                                            uint32_t secret,
                                            uint64_t seed,
                                            uint32_t *recovered);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void dualbent_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DUALBENT_H */
