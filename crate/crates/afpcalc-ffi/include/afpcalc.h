#ifndef AFPCALC_H
#define AFPCALC_H

/* Generated from the Rust sources by cbindgen; do not edit by hand. */

#include <stdbool.h>
#include <stdint.h>

/**
 * Outcome of an FFI call.
 */
typedef enum {
  AFP_CODE_OK = 0,
  AFP_CODE_NULL_ARGUMENT = 1,
  AFP_CODE_INVALID_UTF8 = 2,
  AFP_CODE_PARSE_ERROR = 3,
  AFP_CODE_VALIDATION_ERROR = 4,
  AFP_CODE_INTERNAL_ERROR = 5,
} AfpCode;

/**
 * A parsed and validated computation input.
 */
typedef struct AfpProblem AfpProblem;

/**
 * A finished computation report.
 */
typedef struct AfpResult AfpResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses DSL text into a problem handle, running full validation.
 *
 * On success writes a handle to `out`; the caller releases it with
 * [`afp_problem_free`].
 */
AfpCode afp_problem_parse(const char *text, AfpProblem **out);

/**
 * Releases a problem handle. A null pointer is ignored.
 */
void afp_problem_free(AfpProblem *problem);

/**
 * Runs the calculator on a parsed problem.
 *
 * Always produces a result handle on `Ok`, even when the computation
 * itself reports an error status; inspect [`afp_result_status`].
 */
AfpCode afp_compute(const AfpProblem *problem, AfpResult **out);

/**
 * Releases a result handle. A null pointer is ignored.
 */
void afp_result_free(AfpResult *result);

/**
 * Status of a computation: 0 resolved, 2 partial, 1 error — the same
 * mapping the command-line tool uses for exit codes. Returns -1 for a
 * null handle.
 */
int32_t afp_result_status(const AfpResult *result);

/**
 * The free-dimension value as a rational string (`"7/2"`, `"inf"`),
 * or null when the computation produced none. Free with
 * [`afp_string_free`].
 */
char *afp_result_fdim(const AfpResult *result);

/**
 * The full report as JSON, optionally with the derivation certificate.
 * Free with [`afp_string_free`]. Returns null for a null handle.
 */
char *afp_result_json(const AfpResult *result, bool include_certificate);

/**
 * One-shot convenience: parse, validate, compute and serialize.
 *
 * On `Ok` writes a JSON string to `out_json`, owned by the caller.
 */
AfpCode afp_compute_json(const char *text, bool include_certificate, char **out_json);

/**
 * Releases a string produced by this library. A null pointer is
 * ignored.
 */
void afp_string_free(char *s);

/**
 * A copy of the message attached to the most recent failing call on
 * this thread, or null when the last call succeeded. Free with
 * [`afp_string_free`].
 */
char *afp_last_error_message(void);

/**
 * The library version as a static string; do not free.
 */
const char *afp_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* AFPCALC_H */
