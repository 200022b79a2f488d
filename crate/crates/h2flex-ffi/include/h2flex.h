/* C interface of the h2flex energy-system LP engine. */

#ifndef H2FLEX_H
#define H2FLEX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an FFI call.
 */
typedef enum H2flexStatus {
  H2FLEX_STATUS_OK = 0,
  H2FLEX_STATUS_INVALID_ARGUMENT = 1,
  H2FLEX_STATUS_PARSE_ERROR = 2,
  H2FLEX_STATUS_VALIDATION_FAILED = 3,
  H2FLEX_STATUS_INFEASIBLE = 4,
  H2FLEX_STATUS_UNBOUNDED = 5,
  H2FLEX_STATUS_ITERATION_LIMIT = 6,
  H2FLEX_STATUS_INTERNAL_ERROR = 7,
} H2flexStatus;

/**
 * Opaque handle to a loaded system; create with `h2flex_system_load` or
 * `h2flex_system_demo`, release with `h2flex_system_free`.
 */
typedef struct H2flexSystem H2flexSystem;

/**
 * Key results of one export cell solve.
 */
typedef struct H2flexCellResult {
  /**
   * Total system cost, EUR per year.
   */
  double objective_eur;
  /**
   * Offtake-weighted dual price at the export bus, EUR/MWh.
   */
  double take_off_price_eur_per_mwh;
  /**
   * Variance of the delivery schedule, MW^2.
   */
  double schedule_variance_mw2;
  /**
   * Delivered energy, MWh; equals the requested volume when feasible.
   */
  double total_delivered_mwh;
  /**
   * Interior-point iterations of the cell solve.
   */
  uint32_t iterations;
} H2flexCellResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *h2flex_version(void);

/**
 * Copies the last error message of this thread into `buffer` (truncated to
 * `capacity - 1` bytes, always NUL-terminated) and returns the full message
 * length in bytes. A null or empty buffer only queries the length.
 *
 * # Safety
 * `buffer` must point to at least `capacity` writable bytes, or be null.
 */
uintptr_t h2flex_last_error(char *buffer, uintptr_t capacity);

/**
 * Loads a system TOML file plus its profile CSV directory. `wacc < 0` keeps
 * the system-file default. On success stores a new handle in `out`.
 *
 * # Safety
 * `system_path` and `timeseries_dir` must be NUL-terminated strings and
 * `out` a valid pointer; all may be null, which is reported as an error.
 */
enum H2flexStatus h2flex_system_load(const char *system_path,
                                     const char *timeseries_dir,
                                     double wacc,
                                     struct H2flexSystem **out);

/**
 * Builds the bundled demo benchmark in memory.
 *
 * # Safety
 * `out` must be a valid pointer or null.
 */
enum H2flexStatus h2flex_system_demo(struct H2flexSystem **out);

/**
 * Releases a system handle; null is a no-op.
 *
 * # Safety
 * `system` must be a handle obtained from this library and not yet freed.
 */
void h2flex_system_free(struct H2flexSystem *system);

/**
 * Number of validation violations (0 means well-formed), or -1 on null.
 *
 * # Safety
 * `system` must be a live handle from this library, or null.
 */
int32_t h2flex_system_validate(const struct H2flexSystem *system);

/**
 * Solves one export cell (reference run included and cached) and fills
 * `result` with the objective, take-off price and schedule summary.
 *
 * # Safety
 * `system` must be a live handle and `result` writable; both may be null,
 * which is reported as an error.
 */
enum H2flexStatus h2flex_price_cell(const struct H2flexSystem *system,
                                    double tau,
                                    double volume_mwh,
                                    bool temporal_matching,
                                    double emission_cap_tons,
                                    struct H2flexCellResult *result);

/**
 * Writes the LP of one export cell to `path` in MPS interchange form.
 *
 * # Safety
 * `system` must be a live handle and `path` a NUL-terminated string; both
 * may be null, which is reported as an error.
 */
enum H2flexStatus h2flex_write_mps(const struct H2flexSystem *system,
                                   double tau,
                                   double volume_mwh,
                                   bool temporal_matching,
                                   double emission_cap_tons,
                                   const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* H2FLEX_H */
