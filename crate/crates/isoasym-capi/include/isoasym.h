#ifndef ISOASYM_H
#define ISOASYM_H

/* Generated by cbindgen from isoasym-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum IsoasymStatus {
  ISOASYM_STATUS_OK = 0,
  ISOASYM_STATUS_NULL_ARGUMENT = 1,
  ISOASYM_STATUS_INVALID_UTF8 = 2,
  ISOASYM_STATUS_UNKNOWN_PRESET = 3,
  ISOASYM_STATUS_INVALID_CONFIG = 4,
  ISOASYM_STATUS_EVAL_ERROR = 5,
  ISOASYM_STATUS_BAD_GRID = 6,
  ISOASYM_STATUS_PANIC = 7,
} IsoasymStatus;

/**
 * Opaque handle: a surface family plus everything needed to verify it.
 */
typedef struct IsoasymFamily IsoasymFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build a family handle from a built-in preset id (aliases accepted).
 * On success `*out` owns the handle; free with `isoasym_family_free`.
 */
enum IsoasymStatus isoasym_family_from_preset(const char *id, struct IsoasymFamily **out);

/**
 * Build a family handle from a JSON config document (same schema as the
 * CLI's config files).
 */
enum IsoasymStatus isoasym_family_from_config_json(const char *json, struct IsoasymFamily **out);

/**
 * Release a handle. Passing NULL is a no-op.
 */
void isoasym_family_free(struct IsoasymFamily *fam);

/**
 * Evaluate the surface at (u, v) into `out_xyz[0..3]`.
 */
enum IsoasymStatus isoasym_family_eval(const struct IsoasymFamily *fam,
                                       double u,
                                       double v,
                                       double *out_xyz);

/**
 * Run the verification battery on an `nu` x `nv` grid and hand back the
 * JSON report. Free the string with `isoasym_string_free`.
 */
enum IsoasymStatus isoasym_verify_json(const struct IsoasymFamily *fam,
                                       size_t nu,
                                       size_t nv,
                                       char **out_json);

/**
 * Gating verdict only: `*out_pass` is 1 when every gating check passed.
 */
enum IsoasymStatus isoasym_verify_overall(const struct IsoasymFamily *fam,
                                          size_t nu,
                                          size_t nv,
                                          int32_t *out_pass);

/**
 * Tessellate on an `nu` x `nv` grid and hand back Wavefront OBJ text.
 * Free the string with `isoasym_string_free`.
 */
enum IsoasymStatus isoasym_mesh_obj(const struct IsoasymFamily *fam,
                                    size_t nu,
                                    size_t nv,
                                    char **out_obj);

/**
 * Newline-separated list of preset ids, in the CLI's stable order.
 * Free with `isoasym_string_free`.
 */
enum IsoasymStatus isoasym_preset_ids(char **out_ids);

/**
 * Free a string returned by this library. Passing NULL is a no-op.
 */
void isoasym_string_free(char *s);

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *isoasym_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISOASYM_H */
