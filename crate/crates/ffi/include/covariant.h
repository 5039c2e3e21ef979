#ifndef COVARIANT_H
#define COVARIANT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum CovStatus {
  COV_STATUS_OK = 0,
  COV_STATUS_NULL_POINTER = 1,
  COV_STATUS_INVALID_UTF8 = 2,
  COV_STATUS_INVALID_ARGUMENT = 3,
  COV_STATUS_MALFORMED_TABLE = 4,
  COV_STATUS_NOT_A_GROUP = 5,
  COV_STATUS_UNKNOWN_FAMILY = 6,
  COV_STATUS_OUT_OF_RANGE = 7,
  COV_STATUS_TOO_LARGE = 8,
  COV_STATUS_GRID_TOO_COARSE = 9,
  COV_STATUS_INTERNAL = 10,
} CovStatus;

/**
 * A finite group.
 */
typedef struct CovGroup CovGroup;

/**
 * A suite report.
 */
typedef struct CovReport CovReport;

/**
 * Options for [`cov_suite_run`]. Obtain defaults from
 * [`cov_suite_options_default`].
 */
typedef struct CovSuiteOptions {
  size_t trials;
  uint64_t seed;
  double tolerance;
  double u;
  double v;
  /**
   * When true, `v` is ignored and each subgroup gets `v = 1/|N|`.
   */
  bool probability_v;
} CovSuiteOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *cov_last_error(void);

/**
 * Builds a builtin group such as `"S3"`, `"D4"` or `"Z2xZ2"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CovStatus cov_group_builtin(const char *name, struct CovGroup **out);

/**
 * Parses a Cayley-table document `{"order": n, "table": [[...]], "labels": [...]}`.
 *
 * # Safety
 * `name` and `json` must be NUL-terminated strings and `out` writable.
 */
enum CovStatus cov_group_from_json(const char *name, const char *json, struct CovGroup **out);

/**
 * # Safety
 * `group` must come from this library and not be freed; `out` writable.
 */
enum CovStatus cov_group_order(const struct CovGroup *group, size_t *out);

/**
 * # Safety
 * `group` must be null or a handle from this library not yet freed.
 */
void cov_group_free(struct CovGroup *group);

struct CovSuiteOptions cov_suite_options_default(void);

/**
 * Runs all theorem checks over every normal subgroup and character.
 *
 * # Safety
 * `group` must be a live handle, `options` readable (or null for the
 * defaults) and `out` writable.
 */
enum CovStatus cov_suite_run(const struct CovGroup *group,
                             const struct CovSuiteOptions *options,
                             struct CovReport **out);

/**
 * Runs the ax+b quadrature checks at frequency `omega` on an
 * `nodes × nodes` grid.
 *
 * # Safety
 * `out` must be writable.
 */
enum CovStatus cov_axb_run(double omega, size_t nodes, uint64_t seed, struct CovReport **out);

/**
 * Measured `σ_N((a, b))` for the translation subgroup of the ax+b group.
 *
 * # Safety
 * `out` must be writable.
 */
enum CovStatus cov_axb_sigma(double a, double b, size_t nodes, double *out);

/**
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum CovStatus cov_report_all_pass(const struct CovReport *report, bool *out);

/**
 * Number of checks in the report, and how many failed.
 *
 * # Safety
 * `report` must be a live handle; `total` and `failed` writable.
 */
enum CovStatus cov_report_counts(const struct CovReport *report, size_t *total, size_t *failed);

/**
 * The report as pretty-printed JSON. Release with [`cov_string_free`].
 *
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum CovStatus cov_report_json(const struct CovReport *report, char **out);

/**
 * # Safety
 * `report` must be null or a handle from this library not yet freed.
 */
void cov_report_free(struct CovReport *report);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void cov_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVARIANT_H */
