#ifndef ORBITSTAB_H
#define ORBITSTAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OrbitstabStatus {
  ORBITSTAB_STATUS_OK = 0,
  ORBITSTAB_STATUS_PARSE_ERROR = 1,
  ORBITSTAB_STATUS_HYPOTHESIS_NOT_MET = 2,
  ORBITSTAB_STATUS_SIZE_LIMIT = 3,
  ORBITSTAB_STATUS_INVALID_ARGUMENT = 4,
  ORBITSTAB_STATUS_NULL_POINTER = 5,
  ORBITSTAB_STATUS_INTERNAL = 6,
} OrbitstabStatus;

typedef enum OrbitstabVerdict {
  ORBITSTAB_VERDICT_IN = 0,
  ORBITSTAB_VERDICT_OUT = 1,
  ORBITSTAB_VERDICT_VERIFIED_UP_TO_BOUND = 2,
} OrbitstabVerdict;

/**
 * A parsed scene file.
 */
typedef struct OrbitstabScene OrbitstabScene;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Loads a scene file.
 *
 * # Safety
 * `path` must be a valid nul-terminated string and `out` a valid pointer.
 */
enum OrbitstabStatus orbitstab_scene_load(const char *path, struct OrbitstabScene **out);

/**
 * Parses a scene from a JSON document.
 *
 * # Safety
 * `json` must be a valid nul-terminated string and `out` a valid pointer.
 */
enum OrbitstabStatus orbitstab_scene_parse(const char *json, struct OrbitstabScene **out);

/**
 * Releases a scene; null is ignored.
 *
 * # Safety
 * `scene` must come from `orbitstab_scene_load` or `orbitstab_scene_parse`
 * and must not be used afterwards.
 */
void orbitstab_scene_free(struct OrbitstabScene *scene);

/**
 * Stabilizer descriptor (JSON) of the orbit of `point` under `aut`.
 *
 * # Safety
 * Pointers must be valid; `*out_json` must be released with
 * `orbitstab_string_free`.
 */
enum OrbitstabStatus orbitstab_cyclic_stabilizer(const struct OrbitstabScene *scene,
                                                 const char *aut,
                                                 const char *point,
                                                 char **out_json);

/**
 * Whether `psi` maps the orbit of `point` under `aut` onto itself.
 *
 * # Safety
 * Pointers must be valid.
 */
enum OrbitstabStatus orbitstab_membership(const struct OrbitstabScene *scene,
                                          const char *aut,
                                          const char *point,
                                          const char *psi,
                                          enum OrbitstabVerdict *out_verdict);

/**
 * Degrees of aut, aut², ..., aut^m written to `out_degrees` (length m).
 *
 * # Safety
 * `out_degrees` must have room for `m` values.
 */
enum OrbitstabStatus orbitstab_dynamical_degree(const struct OrbitstabScene *scene,
                                                const char *aut,
                                                size_t m,
                                                uint32_t *out_degrees);

/**
 * Runs a command line (`argv[0]` is the program name) and returns its JSON
 * report and exit status. The status of the call itself is `Ok` whenever a
 * report was produced, including error reports.
 *
 * # Safety
 * `argv` must hold `argc` valid strings; `*out_json` must be released with
 * `orbitstab_string_free`.
 */
enum OrbitstabStatus orbitstab_run(int argc,
                                   const char *const *argv,
                                   char **out_json,
                                   int *out_exit_code);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void orbitstab_string_free(char *s);

/**
 * Message of the most recent failure on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *orbitstab_last_error(void);

/**
 * Library version as a static string.
 */
const char *orbitstab_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBITSTAB_H */
