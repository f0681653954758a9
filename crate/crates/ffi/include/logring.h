#ifndef LOGRING_H
#define LOGRING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum LogringBoundsKind {
  LOGRING_BOUNDS_KIND_EMPTY = 0,
  LOGRING_BOUNDS_KIND_POINT = 1,
  LOGRING_BOUNDS_KIND_OPEN_UNIT = 2,
  LOGRING_BOUNDS_KIND_EVEN = 3,
  LOGRING_BOUNDS_KIND_ODD = 4,
} LogringBoundsKind;

typedef enum LogringStability {
  LOGRING_STABILITY_SPECTRALLY_STABLE = 0,
  LOGRING_STABILITY_DEGENERATE = 1,
  LOGRING_STABILITY_UNSTABLE = 2,
} LogringStability;

typedef enum LogringStatus {
  LOGRING_STATUS_OK = 0,
  LOGRING_STATUS_NULL_POINTER = 1,
  LOGRING_STATUS_INVALID_ARGUMENT = 2,
  LOGRING_STATUS_INDEX_OUT_OF_RANGE = 3,
  LOGRING_STATUS_NUMERICAL_FAILURE = 4,
  LOGRING_STATUS_PANIC = 5,
} LogringStatus;

typedef struct LogringRing LogringRing;

typedef struct LogringSpectrum LogringSpectrum;

typedef struct LogringTrajectory LogringTrajectory;

typedef struct LogringVerdict {
  enum LogringStability stability;
  double max_re_lambda;
  /**
   * -1 when there is no witness.
   */
  int64_t witness_mode;
} LogringVerdict;

/**
 * Stable mass-ratio interval as exact fractions. Zero denominators mean
 * the interval is empty.
 */
typedef struct LogringBounds {
  enum LogringBoundsKind kind;
  int64_t lower_num;
  int64_t lower_den;
  int64_t upper_num;
  int64_t upper_den;
  bool upper_inclusive;
} LogringBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of `status`.
 */
const char *logring_status_message(enum LogringStatus status);

/**
 * Build a ring of `n` bodies. `mu` is ignored when `has_central` is false.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum LogringStatus logring_ring_new(size_t n,
                                    double mu,
                                    bool has_central,
                                    struct LogringRing **out);

/**
 * # Safety
 * `ring` must come from [`logring_ring_new`] and not be freed twice. Null is ignored.
 */
void logring_ring_free(struct LogringRing *ring);

/**
 * # Safety
 * `ring` must be a live handle and `omega` writable.
 */
enum LogringStatus logring_ring_omega(const struct LogringRing *ring, double *omega);

/**
 * # Safety
 * `ring` must be a live handle and `out` writable.
 */
enum LogringStatus logring_classify(const struct LogringRing *ring, struct LogringVerdict *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LogringStatus logring_theorem_bounds(size_t n, struct LogringBounds *out);

/**
 * All `4n` eigenvalues, ordered by mode, then imaginary part descending,
 * then real part descending.
 *
 * # Safety
 * `ring` must be a live handle and `out` writable.
 */
enum LogringStatus logring_spectrum_new(const struct LogringRing *ring,
                                        struct LogringSpectrum **out);

/**
 * # Safety
 * `spectrum` must be a live handle and `len` writable.
 */
enum LogringStatus logring_spectrum_len(const struct LogringSpectrum *spectrum, size_t *len);

/**
 * # Safety
 * `spectrum` must be a live handle; the out-pointers must be writable.
 */
enum LogringStatus logring_spectrum_get(const struct LogringSpectrum *spectrum,
                                        size_t index,
                                        size_t *mode,
                                        double *re,
                                        double *im);

/**
 * # Safety
 * `spectrum` must come from [`logring_spectrum_new`]. Null is ignored.
 */
void logring_spectrum_free(struct LogringSpectrum *spectrum);

/**
 * Integrate for `periods` rotation periods with `samples_per_period`
 * samples per period. `perturb_mode < 0` starts on the equilibrium;
 * otherwise the start is displaced by `eps` along that mode's fastest
 * eigenvector. The absolute tolerance is `rel_tol / 100`. A collision is
 * not an error; see [`logring_trajectory_collided`].
 *
 * # Safety
 * `ring` must be a live handle and `out` writable.
 */
enum LogringStatus logring_simulate(const struct LogringRing *ring,
                                    double periods,
                                    size_t samples_per_period,
                                    int64_t perturb_mode,
                                    double eps,
                                    double rel_tol,
                                    struct LogringTrajectory **out);

/**
 * # Safety
 * `traj` must be a live handle; the out-pointers must be writable.
 */
enum LogringStatus logring_trajectory_shape(const struct LogringTrajectory *traj,
                                            size_t *samples,
                                            size_t *bodies);

/**
 * # Safety
 * `traj` must be a live handle and `collided` writable.
 */
enum LogringStatus logring_trajectory_collided(const struct LogringTrajectory *traj,
                                               bool *collided);

/**
 * Copy sample `index` into `state` as `x, y, vx, vy` per body; `state`
 * must hold `4 * bodies` doubles.
 *
 * # Safety
 * `traj` must be a live handle, `time` writable and `state` valid for
 * `state_len` writes.
 */
enum LogringStatus logring_trajectory_sample(const struct LogringTrajectory *traj,
                                             size_t index,
                                             double *time,
                                             double *state,
                                             size_t state_len);

/**
 * # Safety
 * `traj` must come from [`logring_simulate`]. Null is ignored.
 */
void logring_trajectory_free(struct LogringTrajectory *traj);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LOGRING_H */
