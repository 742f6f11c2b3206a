#ifndef COVERHOM_H
#define COVERHOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CoverhomStatus {
  COVERHOM_STATUS_OK = 0,
  COVERHOM_STATUS_NULL_POINTER = 1,
  COVERHOM_STATUS_INVALID_UTF8 = 2,
  COVERHOM_STATUS_INVALID_INPUT = 3,
  COVERHOM_STATUS_DISCONNECTED = 4,
  COVERHOM_STATUS_BUFFER_TOO_SMALL = 5,
  COVERHOM_STATUS_INTERNAL = 6,
  COVERHOM_STATUS_PANIC = 7,
} CoverhomStatus;

// Opaque built cover.
typedef struct CoverhomCover CoverhomCover;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a cover from a JSON description (same format as the CLI `--cover`).
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum CoverhomStatus coverhom_cover_from_json(const char *json, struct CoverhomCover **out);

// Builds the mod-`ell` homology cover of the closed genus `genus` surface.
//
// # Safety
// `out` must be a valid pointer.
enum CoverhomStatus coverhom_cover_mod_ell(uint32_t genus,
                                           uint64_t ell,
                                           struct CoverhomCover **out);

// # Safety
// `cover` must come from this library and not be freed twice. Null is ignored.
void coverhom_cover_free(struct CoverhomCover *cover);

// Number of sheets.
//
// # Safety
// `cover` must be a live handle and `out` a valid pointer.
enum CoverhomStatus coverhom_cover_degree(const struct CoverhomCover *cover, uintptr_t *out);

// Rank of the first homology of the closed covering surface.
//
// # Safety
// `cover` must be a live handle and `out` a valid pointer.
enum CoverhomStatus coverhom_cover_rank(const struct CoverhomCover *cover, uintptr_t *out);

// Genus of the covering surface.
//
// # Safety
// `cover` must be a live handle and `out` a valid pointer.
enum CoverhomStatus coverhom_cover_genus(const struct CoverhomCover *cover, int64_t *out);

// Euler characteristic of the covering surface.
//
// # Safety
// `cover` must be a live handle and `out` a valid pointer.
enum CoverhomStatus coverhom_cover_euler_characteristic(const struct CoverhomCover *cover,
                                                        int64_t *out);

// Copies the intersection form, row-major, into `buf` of length `len`.
// `written` receives `rank * rank`; if `len` is smaller nothing is copied
// and `BufferTooSmall` is returned.
//
// # Safety
// `buf` must hold `len` elements; `written` must be a valid pointer.
enum CoverhomStatus coverhom_cover_gram(const struct CoverhomCover *cover,
                                        int64_t *buf,
                                        uintptr_t len,
                                        uintptr_t *written);

// Lifts the word from `sheet` (0-based) until it closes. `passes` receives
// the number of passes; `buf` (length `len`, at least the rank) receives
// the homology class.
//
// # Safety
// `word` must be NUL-terminated, `buf` must hold `len` elements and
// `passes` must be a valid pointer.
enum CoverhomStatus coverhom_lift_class(const struct CoverhomCover *cover,
                                        const char *word,
                                        uintptr_t sheet,
                                        int64_t *buf,
                                        uintptr_t len,
                                        uintptr_t *passes);

// Runs a named check (`fullness`, `symplectic`, `twistfixed`, `pants`,
// `gap`, `orbit`, `powerlemma`) with parameters given as a JSON object
// keyed like the CLI flags (null or empty for defaults). `cover` may be
// null for `gap` and `powerlemma`. On success `report` receives the JSON
// report and `exit_code` the CLI exit code of its verdict.
//
// # Safety
// String arguments must be NUL-terminated or null where allowed;
// `report` and `exit_code` must be valid pointers.
enum CoverhomStatus coverhom_run_check(const struct CoverhomCover *cover,
                                       const char *name,
                                       const char *params_json,
                                       char **report,
                                       int32_t *exit_code);

// # Safety
// `s` must come from this library. Null is ignored.
void coverhom_string_free(char *s);

// Message for the last failure on this thread, or null. Valid until the
// next call into this library on the same thread.
const char *coverhom_last_error(void);

// Library version as a static NUL-terminated string.
const char *coverhom_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVERHOM_H */
