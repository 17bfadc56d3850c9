#ifndef QFSYS_H
#define QFSYS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QfsStatus {
  QFS_STATUS_OK = 0,
  QFS_STATUS_NULL_POINTER = 1,
  QFS_STATUS_INVALID_UTF8 = 2,
  QFS_STATUS_PARSE = 3,
  QFS_STATUS_INVALID_ARGUMENT = 4,
  /**
   * A typed mathematical refusal: singular system, degree cap, unmet
   * precondition or unsupported input.
   */
  QFS_STATUS_REFUSED = 5,
  /**
   * The search finished without finding what was asked for.
   */
  QFS_STATUS_NOT_FOUND = 6,
  QFS_STATUS_INTERNAL = 7,
  QFS_STATUS_PANIC = 8,
} QfsStatus;

/**
 * Opaque system handle.
 */
typedef struct QfsSystem QfsSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next qfsys call on the same thread.
 */
const char *qfs_last_error(void);

/**
 * Parse a system from its JSON text. On success `*out` owns a new handle.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` valid for writes.
 */
enum QfsStatus qfs_system_from_json(const char *json, struct QfsSystem **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `sys` must come from `qfs_system_from_json` and not be used afterwards.
 */
void qfs_system_free(struct QfsSystem *sys);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void qfs_string_free(char *s);

/**
 * Dimension of the underlying space.
 *
 * # Safety
 * `sys` must be a live handle and `out` valid for writes.
 */
enum QfsStatus qfs_system_dim(const struct QfsSystem *sys, size_t *out);

/**
 * Number of forms in the system.
 *
 * # Safety
 * `sys` must be a live handle and `out` valid for writes.
 */
enum QfsStatus qfs_system_len(const struct QfsSystem *sys, size_t *out);

/**
 * Canonical JSON of the system. Free the result with `qfs_string_free`.
 *
 * # Safety
 * `sys` must be a live handle and `out` valid for writes.
 */
enum QfsStatus qfs_system_to_json(const struct QfsSystem *sys, char **out);

/**
 * Trace test: signature of the involution trace form, and whether some
 * multiple of the system is hyperbolic (that signature is zero).
 *
 * # Safety
 * `sys` must be a live handle; the outputs must be valid for writes.
 */
enum QfsStatus qfs_decide(const struct QfsSystem *sys, int64_t *trace_sgn, bool *exists_n);

/**
 * Dimension of the closure of the system.
 *
 * # Safety
 * `sys` must be a live handle and `out` valid for writes.
 */
enum QfsStatus qfs_closure_dim(const struct QfsSystem *sys, size_t *out);

/**
 * Smallest `2^k` with `k <= cap` such that that many copies are hyperbolic.
 * Returns `NotFound` when no level up to the cap was found; `*exact` then
 * tells whether every level was ruled out rather than merely not found.
 *
 * # Safety
 * `sys` must be a live handle; the outputs must be valid for writes.
 */
enum QfsStatus qfs_weak_order(const struct QfsSystem *sys,
                              uint32_t cap,
                              uint32_t budget,
                              uint64_t *order,
                              bool *exact);

/**
 * A closure form of nonzero signature, as a one-matrix JSON payload. Pairs
 * use the exact pair construction; larger systems a scan of height
 * `budget` over the closure basis. Returns `NotFound` when there is none.
 *
 * # Safety
 * `sys` must be a live handle and `out` valid for writes.
 */
enum QfsStatus qfs_witness_json(const struct QfsSystem *sys, uint32_t budget, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QFSYS_H */
