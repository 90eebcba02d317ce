#ifndef CHIPFIRE_H
#define CHIPFIRE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_INVALID_ARGUMENT = 2,
  CF_STATUS_BUDGET_EXCEEDED = 3,
  CF_STATUS_NOT_PRECONFINED = 4,
  CF_STATUS_DEGENERATE_STAIR = 5,
  CF_STATUS_UNKNOWN_LAW = 6,
  CF_STATUS_IO = 7,
  CF_STATUS_OVERFLOW = 8,
  CF_STATUS_PANIC = 9,
} CfStatus;

/**
 * A chip configuration on `K_n`.
 */
typedef struct CfConfig CfConfig;

/**
 * A phase diagram `k ↦ a(σ_n + k)`, `k = 0..=n`.
 */
typedef struct CfDiagram CfDiagram;

/**
 * The exact lift of a preconfined configuration.
 */
typedef struct CfLift CfLift;

typedef struct CfSummary {
  size_t n;
  uint64_t transient;
  uint64_t period;
  uint64_t activity_num;
  uint64_t activity_den;
} CfSummary;

typedef struct CfRotation {
  double lower;
  double upper;
  /**
   * True when `num/den` is certified.
   */
  bool snapped;
  uint64_t num;
  uint64_t den;
} CfRotation;

typedef struct CfStair {
  double a;
  double b;
  double width;
} CfStair;

typedef struct CfRow {
  uint64_t k;
  uint64_t activity_num;
  uint64_t activity_den;
  uint64_t period;
  uint64_t transient;
} CfRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread; empty if none.
 * The pointer stays valid until the next failing call on this thread.
 */
const char *cf_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cf_version(void);

/**
 * Copies `n` heights into a new configuration.
 *
 * # Safety
 * `heights` must point to `n` readable values; `out` must be writable.
 */
enum CfStatus cf_config_new(const uint64_t *heights, size_t n, struct CfConfig **out);

/**
 * `σ_n + k` for a family named `slope2`, `constant:<c>` or `pq:<p>/<q>`.
 *
 * # Safety
 * `family` must be a NUL-terminated string; `out` must be writable.
 */
enum CfStatus cf_config_family(const char *family, size_t n, uint64_t k, struct CfConfig **out);

/**
 * # Safety
 * `cfg` must come from a `cf_config_*` constructor, or be null.
 */
void cf_config_free(struct CfConfig *cfg);

/**
 * Number of vertices; 0 for a null handle.
 *
 * # Safety
 * `cfg` must be a live handle or null.
 */
size_t cf_config_n(const struct CfConfig *cfg);

/**
 * Copies the heights into `buf`, which must hold at least `n` values.
 *
 * # Safety
 * `cfg` must be a live handle; `buf` must have room for `len` values.
 */
enum CfStatus cf_config_heights(const struct CfConfig *cfg, uint64_t *buf, size_t len);

/**
 * Applies one parallel update in place; `fired` (optional) receives the
 * number of vertices that fired.
 *
 * # Safety
 * `cfg` must be a live handle; `fired` must be writable or null.
 */
enum CfStatus cf_config_update(struct CfConfig *cfg, size_t *fired);

/**
 * Runs to the eventual cycle; `max_steps = 0` uses the default budget.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum CfStatus cf_simulate(const struct CfConfig *cfg, uint64_t max_steps, struct CfSummary *out);

/**
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum CfStatus cf_lift_from_config(const struct CfConfig *cfg, struct CfLift **out);

/**
 * # Safety
 * `lift` must come from `cf_lift_from_config`, or be null.
 */
void cf_lift_free(struct CfLift *lift);

/**
 * `f^t(0)` as the reduced fraction `num/den`.
 *
 * # Safety
 * `lift` must be a live handle; `num` and `den` must be writable.
 */
enum CfStatus cf_lift_iterate_zero(const struct CfLift *lift,
                                   uint64_t t,
                                   int64_t *num,
                                   int64_t *den);

/**
 * The exact rotation number from the orbit of 0, following at most
 * `max_iter` iterates (0 means 2^20).
 *
 * # Safety
 * `lift` must be a live handle; `num` and `den` must be writable.
 */
enum CfStatus cf_lift_rotation_number(const struct CfLift *lift,
                                      uint64_t max_iter,
                                      uint64_t *num,
                                      uint64_t *den);

/**
 * `ρ(Φ_y)` for a built-in CDF (`slope2`, `sqrt`, `sine`, `identity`).
 *
 * # Safety
 * `cdf` must be a NUL-terminated string; `out` must be writable.
 */
enum CfStatus cf_rotation_cdf(const char *cdf, double y, struct CfRotation *out);

/**
 * The stair `{y : ρ(Φ_y) = p/q}` with endpoints within `tol`.
 *
 * # Safety
 * `cdf` must be a NUL-terminated string; `out` must be writable.
 */
enum CfStatus cf_stair_interval(const char *cdf,
                                uint64_t p,
                                uint64_t q,
                                double tol,
                                struct CfStair *out);

/**
 * `budget = 0` uses the default per-`k` budget.
 *
 * # Safety
 * `family` must be a NUL-terminated string; `out` must be writable.
 */
enum CfStatus cf_phase_diagram(const char *family,
                               size_t n,
                               uint64_t budget,
                               struct CfDiagram **out);

/**
 * # Safety
 * `d` must come from `cf_phase_diagram`, or be null.
 */
void cf_diagram_free(struct CfDiagram *d);

/**
 * Number of rows (`n + 1`); 0 for a null handle.
 *
 * # Safety
 * `d` must be a live handle or null.
 */
size_t cf_diagram_len(const struct CfDiagram *d);

/**
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum CfStatus cf_diagram_row(const struct CfDiagram *d, size_t index, struct CfRow *out);

/**
 * Runs a law suite (`all` or a law name). `json_out` receives the report,
 * to be released with `cf_string_free`; `passed` is set when every law held.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; the out pointers must be writable.
 */
enum CfStatus cf_check_laws(const char *suite,
                            size_t n_min,
                            size_t n_max,
                            size_t trials,
                            uint64_t seed,
                            char **json_out,
                            bool *passed);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void cf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHIPFIRE_H */
