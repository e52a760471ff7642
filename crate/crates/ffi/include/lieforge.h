#ifndef LIEFORGE_H
#define LIEFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum LfStatus {
  LF_OK = 0,
  // The run completed and at least one check failed.
  LF_CHECK_FAILED = 1,
  // The run completed and a check's preconditions did not hold.
  LF_PRECONDITION_FAILED = 2,
  LF_PARSE_ERROR = 3,
  LF_NULL_ARGUMENT = 4,
  LF_INVALID_UTF8 = 5,
  LF_NOT_FOUND = 6,
  LF_PANIC = 7,
} LfStatus;

// A parsed program; opaque to C.
typedef struct LfWorkspace LfWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread, or NULL. Valid until
// the next call into the library on the same thread.
const char *lf_last_error(void);

// Library version as a static string.
const char *lf_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void lf_string_free(char *s);

// Parses DSL source into a new workspace.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum LfStatus lf_workspace_parse(const char *text, struct LfWorkspace **out);

// # Safety
// `ws` must come from [`lf_workspace_parse`] and not have been freed.
void lf_workspace_free(struct LfWorkspace *ws);

// Runs the check queue and writes the JSON report to `json_out`.
// `threads == 0` uses the default pool.
//
// # Safety
// `ws` must be a live workspace; `json_out` must be writable.
enum LfStatus lf_workspace_run(const struct LfWorkspace *ws, size_t threads, char **json_out);

// Canonical DSL text of a workspace.
//
// # Safety
// `ws` must be a live workspace; `out` must be writable.
enum LfStatus lf_workspace_to_dsl(const struct LfWorkspace *ws, char **out);

// Emits a catalog entry as DSL (`as_json == 0`) or JSON.
//
// # Safety
// `name` must be a NUL-terminated string, `params` must point to
// `n_params` values (or be NULL when `n_params == 0`), `out` writable.
enum LfStatus lf_catalog_emit(const char *name,
                              const size_t *params,
                              size_t n_params,
                              int32_t as_json,
                              char **out);

// Runs the acceptance suite; `LF_OK` iff every criterion passes.
//
// # Safety
// `json_out` must be writable.
enum LfStatus lf_acceptance(char **json_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIEFORGE_H */
