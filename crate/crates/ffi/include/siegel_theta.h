#ifndef SIEGEL_THETA_H
#define SIEGEL_THETA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum StStatus {
  ST_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ST_STATUS_NULL_POINTER = 1,
  /**
   * An input string was not UTF-8.
   */
  ST_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON.
   */
  ST_STATUS_PARSE = 3,
  /**
   * Well-formed input that violates a precondition.
   */
  ST_STATUS_INVALID = 4,
  /**
   * Internal failure; the message has details.
   */
  ST_STATUS_INTERNAL = 5,
} StStatus;

/**
 * Opaque truncated q-expansion.
 */
typedef struct StQExp StQExp;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *st_last_error_message(void);

/**
 * Stable machine-readable code of the last failed call on this thread, or null.
 */
const char *st_last_error_code(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library and not yet freed.
 */
void st_string_free(char *s);

/**
 * Parses a q-expansion document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum StStatus st_qexp_from_json(const char *json, struct StQExp **out);

/**
 * Releases a q-expansion handle. Null is ignored.
 *
 * # Safety
 * `f` must be null or a handle from this library that has not been freed.
 */
void st_qexp_free(struct StQExp *f);

/**
 * Canonical JSON of a q-expansion.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum StStatus st_qexp_to_json(const struct StQExp *f, char **out);

/**
 * Applies theta `iterations` times, producing a new handle.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum StStatus st_qexp_theta(const struct StQExp *f, uint32_t iterations, struct StQExp **out);

/**
 * Whether every stored coefficient sits at a `T` with `p | det T`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum StStatus st_qexp_is_weakly_p_singular(const struct StQExp *f, bool *out);

/**
 * Weight `(k1, k2)` of a q-expansion.
 *
 * # Safety
 * `f` must be a live handle; outputs must be writable.
 */
enum StStatus st_qexp_weight(const struct StQExp *f, int64_t *k1, int64_t *k2);

/**
 * Parallel shift `m` added by theta at weight `(k1, k2)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum StStatus st_m_shift(int64_t p, int64_t k1, int64_t k2, int64_t *out);

/**
 * Theta cycle as JSON: one object from the closed form, or an array of
 * candidates when `solver` is set.
 *
 * # Safety
 * `out` must be writable.
 */
enum StStatus st_cycle_json(int64_t p,
                            int64_t r,
                            int64_t k,
                            bool semi_ordinary,
                            bool solver,
                            char **out);

/**
 * Classical Serre weight of a descriptor document.
 *
 * # Safety
 * `descriptor` must be a nul-terminated string; outputs must be writable.
 */
enum StStatus st_serre_weight(const char *descriptor, int64_t *k1, int64_t *k2, int64_t *w);

/**
 * Position `j` in the cycle and whether the small theta operator is used.
 *
 * # Safety
 * Outputs must be writable.
 */
enum StStatus st_selector(int64_t p, int64_t w, int64_t *j, bool *use_theta3);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIEGEL_THETA_H */
