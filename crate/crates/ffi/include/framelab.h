#ifndef FRAMELAB_H
#define FRAMELAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum FlStatus {
  FL_STATUS_OK = 0,
  FL_STATUS_NULL_POINTER = 1,
  FL_STATUS_INVALID_ARGUMENT = 2,
  FL_STATUS_SHAPE_MISMATCH = 3,
  FL_STATUS_NON_FINITE = 4,
  FL_STATUS_SINGULAR = 5,
  FL_STATUS_NOT_PARSEVAL = 6,
  FL_STATUS_NO_COMPLEMENT = 7,
  FL_STATUS_NOT_UNIT_NORM = 8,
  FL_STATUS_STEP_TOO_LARGE = 9,
  FL_STATUS_NOT_PROJECTION = 10,
  FL_STATUS_RANK_MISMATCH = 11,
  FL_STATUS_UNSUPPORTED = 12,
  FL_STATUS_INFEASIBLE = 13,
  FL_STATUS_NO_CONVERGENCE = 14,
  FL_STATUS_BUFFER_TOO_SMALL = 15,
  FL_STATUS_PANIC = 16,
  FL_STATUS_OTHER = 17,
} FlStatus;

// An approximate Schauder frame over `l^p_d`.
typedef struct FlAsf FlAsf;

// A frame of `n` vectors in `R^d`.
typedef struct FlFrame FlFrame;

// A certified projection.
typedef struct FlProjection FlProjection;

// Certificate of a frame. Absent epsilons are NaN.
typedef struct FlFrameReport {
  size_t dim;
  size_t n;
  double lower_bound;
  double upper_bound;
  bool is_frame;
  double eps_parseval;
  double eps_equal_norm;
  double tightness_defect_hs;
  double unit_defect_hs;
  double frame_potential;
} FlFrameReport;

typedef struct FlFlowConfig {
  // Must satisfy `0 < step_t < 1/(2n)`.
  double step_t;
  size_t max_iters;
  double stop_defect;
  // Renormalize every vector after this many steps; 0 disables.
  size_t renormalize_every;
} FlFlowConfig;

typedef struct FlFlowSummary {
  size_t final_iter;
  bool converged;
  double unit_defect_hs;
  double frame_potential;
  bool coprime;
  double displacement;
} FlFlowSummary;

// Certificate of an ASF. Absent epsilons are NaN.
typedef struct FlAsfReport {
  bool invertible;
  double min_singular_value;
  bool parseval;
  bool funtf;
  bool spectrum_real;
  double eps_parseval;
  double eps_equal_norm;
} FlAsfReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a
// success. Valid until the next `fl_*` call on the same thread.
const char *fl_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *fl_version(void);

// Builds a frame from `n * dim` row-major values.
//
// # Safety
// `vectors` must point to `n * dim` readable doubles and `out` to a
// writable handle slot.
enum FlStatus fl_frame_new(size_t dim, size_t n, const double *vectors, struct FlFrame **out);

// Releases a frame. Null is ignored.
//
// # Safety
// `frame` must come from this library and not be used afterwards.
void fl_frame_free(struct FlFrame *frame);

// Dimension of the ambient space, or 0 for null.
//
// # Safety
// `frame` must be null or a live handle.
size_t fl_frame_dim(const struct FlFrame *frame);

// Number of vectors, or 0 for null.
//
// # Safety
// `frame` must be null or a live handle.
size_t fl_frame_len(const struct FlFrame *frame);

// Copies the vectors row-major into `buf`, which holds `capacity` doubles.
//
// # Safety
// `buf` must point to `capacity` writable doubles.
enum FlStatus fl_frame_copy_vectors(const struct FlFrame *frame, double *buf, size_t capacity);

// # Safety
// Pointers must be live handles or writable structs.
enum FlStatus fl_frame_analyze(const struct FlFrame *frame, struct FlFrameReport *out);

// `sum_j |a_j - b_j|^2` square-rooted.
//
// # Safety
// Pointers must be live handles or a writable double.
enum FlStatus fl_frame_dist(const struct FlFrame *a, const struct FlFrame *b, double *out);

// Closest Parseval frame. `dist_sq` may be null.
//
// # Safety
// Pointers must be live handles or writable slots.
enum FlStatus fl_frame_closest_parseval(const struct FlFrame *frame,
                                        struct FlFrame **out,
                                        double *dist_sq);

// Closest equal-norm frame with common norm `target` (NaN: mean norm).
//
// # Safety
// Pointers must be live handles or writable slots.
enum FlStatus fl_frame_closest_equal_norm(const struct FlFrame *frame,
                                          double target,
                                          struct FlFrame **out,
                                          double *dist_sq);

// Equal-norm Parseval frame near `frame`, certified to `tol`.
//
// # Safety
// Pointers must be live handles or writable slots.
enum FlStatus fl_frame_nearest_enp(const struct FlFrame *frame,
                                   double tol,
                                   size_t max_rounds,
                                   struct FlFrame **out,
                                   double *dist_sq);

// Naimark complement of a Parseval frame (Parseval within `tol`).
//
// # Safety
// Pointers must be live handles or writable slots.
enum FlStatus fl_frame_naimark(const struct FlFrame *frame, double tol, struct FlFrame **out);

// Defaults for a frame of `n` vectors: `t = 1/(4n)`.
struct FlFlowConfig fl_flow_default_config(size_t n);

// Runs the equalization flow on a unit-norm frame. `summary` may be null.
//
// # Safety
// Pointers must be live handles or writable slots.
enum FlStatus fl_flow_run(const struct FlFrame *frame,
                          const struct FlFlowConfig *config,
                          struct FlFrame **out,
                          struct FlFlowSummary *summary);

// Builds an ASF over `l^p_dim` (`p` may be INFINITY) from `n` functionals
// and `n` vectors, each row-major.
//
// # Safety
// `functionals` and `vectors` must point to `n * dim` readable doubles.
enum FlStatus fl_asf_new(size_t dim,
                         double p,
                         size_t n,
                         const double *functionals,
                         const double *vectors,
                         struct FlAsf **out);

// Releases an ASF. Null is ignored.
//
// # Safety
// `asf` must come from this library and not be used afterwards.
void fl_asf_free(struct FlAsf *asf);

// # Safety
// Pointers must be live handles or writable structs.
enum FlStatus fl_asf_analyze(const struct FlAsf *asf, double tol, struct FlAsfReport *out);

// Default ASF distance, `(sum_j (|a_j - b_j|_p^2 + |f_j - g_j|_q^2) / 2)^(1/2)`.
//
// # Safety
// Pointers must be live handles or a writable double.
enum FlStatus fl_asf_dist(const struct FlAsf *a, const struct FlAsf *b, double *out);

// Certifies a `dim x dim` row-major matrix as a projection within `tol`.
//
// # Safety
// `matrix` must point to `dim * dim` readable doubles.
enum FlStatus fl_projection_new(size_t dim,
                                const double *matrix,
                                bool orthogonal_required,
                                double tol,
                                struct FlProjection **out);

// Releases a projection. Null is ignored.
//
// # Safety
// `p` must come from this library and not be used afterwards.
void fl_projection_free(struct FlProjection *p);

// Rank of the projection, or 0 for null.
//
// # Safety
// `p` must be null or a live handle.
size_t fl_projection_rank(const struct FlProjection *p);

// Chordal distance between equal-rank projections.
//
// # Safety
// Pointers must be live handles or a writable double.
enum FlStatus fl_chordal_distance(const struct FlProjection *p,
                                  const struct FlProjection *q,
                                  double tol,
                                  double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRAMELAB_H */
