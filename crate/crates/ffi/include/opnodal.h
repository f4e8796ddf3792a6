#ifndef OPNODAL_H
#define OPNODAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OpnStatus {
  OPN_STATUS_OK = 0,
  OPN_STATUS_NULL_POINTER = 1,
  OPN_STATUS_INVALID_UTF8 = 2,
  OPN_STATUS_INVALID_ARGUMENT = 3,
  OPN_STATUS_DOMAIN_ERROR = 4,
  OPN_STATUS_PANIC = 5,
} OpnStatus;

typedef enum OpnTrajectoryStatus {
  OPN_TRAJECTORY_STATUS_COMPLETED = 0,
  OPN_TRAJECTORY_STATUS_STEP_LIMIT = 1,
  OPN_TRAJECTORY_STATUS_NO_CHART_AVAILABLE = 2,
} OpnTrajectoryStatus;

/*
 An integrated trajectory.
 */
typedef struct OpnTrajectory OpnTrajectory;

typedef struct OpnIntegratorConfig {
  double rel_tol;
  double abs_tol;
  double max_step;
  /*
   Chart switching threshold.
   */
  double rho;
  double min_puncture_distance;
  uint64_t max_steps;
} OpnIntegratorConfig;

typedef struct OpnComplex {
  double re;
  double im;
} OpnComplex;

typedef struct OpnSample {
  struct OpnComplex t;
  uint32_t chart;
  struct OpnComplex x;
  struct OpnComplex y;
} OpnSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null after a success.
 The pointer stays valid until the next call into the library on this
 thread.
 */
const char *opn_last_error(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void opn_string_free(char *s);

/*
 Writes the default integrator settings.

 # Safety
 `out` must be valid for writes.
 */
enum OpnStatus opn_default_config(struct OpnIntegratorConfig *out);

/*
 Classification table 2, 3 or 4 as JSON.

 # Safety
 `out` must be valid for writes.
 */
enum OpnStatus opn_table_json(uint32_t table, char **out);

/*
 E8 roots spanning `root_type` (e.g. `"D4+A1^4"`) as a JSON array of
 doubled coordinates.

 # Safety
 `root_type` must be a nul-terminated string and `out` valid for writes.
 */
enum OpnStatus opn_embedding_json(const char *root_type, char **out);

/*
 # Safety
 `out` must be valid for writes.
 */
enum OpnStatus opn_moduli_dim(int64_t r, int64_t s, int64_t *out);

/*
 Riccati loci of a Painleve type (`"E6"`, `"D4~"`, ...) as JSON.

 # Safety
 `painleve` must be a nul-terminated string and `out` valid for writes.
 */
enum OpnStatus opn_riccati_catalog_json(const char *painleve, char **out);

/*
 Active loci and their configuration type at the given parameters, as
 JSON `{"active": [...], "configuration": "..."}`.

 # Safety
 `painleve` must be a nul-terminated string, `params` must point to
 `n_params` values and `out` must be valid for writes.
 */
enum OpnStatus opn_config_json(const char *painleve,
                               const struct OpnComplex *params,
                               size_t n_params,
                               char **out);

/*
 Integrates the Painleve system of `painleve` from `(x, y)` in `chart`
 along the waypoints `path`. A null `cfg` selects the defaults. The
 trajectory is returned even when its status is not `Completed`.

 # Safety
 Pointers must be valid for the stated lengths; `out` must be valid for
 writes.
 */
enum OpnStatus opn_integrate(const char *painleve,
                             const struct OpnComplex *params,
                             size_t n_params,
                             uint32_t chart,
                             struct OpnComplex x,
                             struct OpnComplex y,
                             const struct OpnComplex *path,
                             size_t n_path,
                             const struct OpnIntegratorConfig *cfg,
                             struct OpnTrajectory **out);

/*
 Integrates the scalar Riccati equation on `locus`, directly or through
 its linearization. Samples store the value on chart 0 (`x`) or chart 1
 (`1/x`) in their `x` field.

 # Safety
 As for [`opn_integrate`]; `locus` must be a nul-terminated string.
 */
enum OpnStatus opn_riccati_solve(const char *painleve,
                                 const char *locus,
                                 const struct OpnComplex *params,
                                 size_t n_params,
                                 struct OpnComplex x0,
                                 const struct OpnComplex *path,
                                 size_t n_path,
                                 bool linear,
                                 const struct OpnIntegratorConfig *cfg,
                                 struct OpnTrajectory **out);

/*
 Number of samples; 0 for a null handle.

 # Safety
 `h` must be null or a live handle.
 */
size_t opn_trajectory_len(const struct OpnTrajectory *h);

/*
 Number of chart switches.

 # Safety
 `h` must be null or a live handle.
 */
size_t opn_trajectory_switch_count(const struct OpnTrajectory *h);

/*
 # Safety
 `h` must be a live handle and `out` valid for writes.
 */
enum OpnStatus opn_trajectory_sample(const struct OpnTrajectory *h,
                                     size_t index,
                                     struct OpnSample *out);

/*
 # Safety
 `h` must be a live handle and `out` valid for writes.
 */
enum OpnStatus opn_trajectory_status(const struct OpnTrajectory *h, enum OpnTrajectoryStatus *out);

/*
 The trajectory as CSV with header `t_re,t_im,chart,x_re,x_im,y_re,y_im`.

 # Safety
 `h` must be a live handle and `out` valid for writes.
 */
enum OpnStatus opn_trajectory_csv(const struct OpnTrajectory *h, char **out);

/*
 Releases a trajectory. Null is ignored.

 # Safety
 `h` must be null or a live handle, not used afterwards.
 */
void opn_trajectory_free(struct OpnTrajectory *h);

/*
 Runs every reproducibility check with `seed`. Writes the number of
 passing checks to `passed` and their results as JSON to `out`.

 # Safety
 `passed` and `out` must be valid for writes.
 */
enum OpnStatus opn_verify_all(uint64_t seed, uint32_t *passed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPNODAL_H */
