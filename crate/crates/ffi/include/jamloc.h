#ifndef JAMLOC_H
#define JAMLOC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum JlMethod {
  JL_METHOD_CL = 0,
  JL_METHOD_CJ = 1,
  JL_METHOD_GJL = 2,
} JlMethod;

typedef enum JlMode {
  JL_MODE_PAPER = 0,
  JL_MODE_GEOMETRIC = 1,
  /**
   * Not a GJL estimator.
   */
  JL_MODE_NONE = 2,
} JlMode;

typedef enum JlStatus {
  JL_STATUS_OK = 0,
  JL_STATUS_NULL_POINTER = 1,
  JL_STATUS_INVALID_ARGUMENT = 2,
  JL_STATUS_INVALID_CONFIG = 3,
  JL_STATUS_EMPTY_POINT_SET = 4,
  JL_STATUS_DEGENERATE_SEGMENT = 5,
  JL_STATUS_NEAR_PARALLEL_LINES = 6,
  JL_STATUS_NO_BOUNDARY_NODES = 7,
  JL_STATUS_INSUFFICIENT_BOUNDARY_NODES = 8,
  JL_STATUS_NO_TRANSVERSE_CHORD = 9,
  JL_STATUS_OUT_OF_RANGE = 10,
  JL_STATUS_PANIC = 99,
} JlStatus;

/**
 * Opaque experiment result.
 */
typedef struct JlExperiment JlExperiment;

/**
 * Opaque list of boundary observations.
 */
typedef struct JlObservations JlObservations;

typedef struct JlPoint {
  double x;
  double y;
} JlPoint;

typedef struct JlCircle {
  double x;
  double y;
  double radius;
} JlCircle;

typedef struct JlEstimate {
  double x;
  double y;
  /**
   * Method that produced the position (CJ when GJL fell back).
   */
  enum JlMethod method;
  bool fallback;
} JlEstimate;

/**
 * Per-estimator summary. Error statistics are NaN when every trial failed.
 */
typedef struct JlSummaryRow {
  enum JlMethod method;
  enum JlMode mode;
  size_t trials;
  size_t clean;
  size_t fallbacks;
  size_t failures;
  double mean_error;
  double std_error;
  double median_error;
} JlSummaryRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *jl_version(void);

/**
 * Message of the last failure on this thread, or NULL. Valid until the next
 * `jl_*` call on the same thread.
 */
const char *jl_last_error_message(void);

void jl_string_free(char *s);

/**
 * Minimum enclosing circle of `len` points.
 */
enum JlStatus jl_min_enclosing_circle(const struct JlPoint *points,
                                      size_t len,
                                      struct JlCircle *out);

/**
 * GJL perpendicular offset for a chord of length `d12` whose endpoints sense
 * `p1 <= p2` dBm.
 */
enum JlStatus jl_compensation_delta(double p1,
                                    double p2,
                                    double d12,
                                    enum JlMode mode,
                                    double *out);

struct JlObservations *jl_observations_new(void);

void jl_observations_free(struct JlObservations *obs);

/**
 * Appends one boundary observation (`power` in dBm).
 */
enum JlStatus jl_observations_push(struct JlObservations *obs,
                                   uint32_t node_id,
                                   double x,
                                   double y,
                                   double power);

size_t jl_observations_len(const struct JlObservations *obs);

/**
 * Localizes with one method. GJL answers chord failures with CJ and sets
 * `out->fallback`; `mode` is ignored for CL and CJ.
 */
enum JlStatus jl_localize(const struct JlObservations *obs,
                          enum JlMethod method,
                          enum JlMode mode,
                          double min_angle_deg,
                          struct JlEstimate *out);

/**
 * Runs the scenario described by the JSON document `config_json` and stores
 * a new handle in `*out`. `parallel` selects multi-threaded trial execution;
 * results are identical either way.
 */
enum JlStatus jl_experiment_run(const char *config_json, bool parallel, struct JlExperiment **out);

void jl_experiment_free(struct JlExperiment *exp);

size_t jl_experiment_trial_count(const struct JlExperiment *exp);

size_t jl_experiment_summary_len(const struct JlExperiment *exp);

enum JlStatus jl_experiment_summary_get(const struct JlExperiment *exp,
                                        size_t index,
                                        struct JlSummaryRow *out);

/**
 * Per-trial CSV table (same format as the CLI's `trials.csv`). Free the
 * result with [`jl_string_free`]. Returns NULL on failure.
 */
char *jl_experiment_trials_csv(const struct JlExperiment *exp);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JAMLOC_H */
