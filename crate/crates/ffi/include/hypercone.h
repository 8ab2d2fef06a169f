#ifndef HYPERCONE_H
#define HYPERCONE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Side of the cone angle.
 */
typedef enum HcBranch {
  HC_BRANCH_BELOW = 0,
  HC_BRANCH_ABOVE = 1,
} HcBranch;

/**
 * Result code of every call.
 */
typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_PARAMS = 2,
  /**
   * The root count or bracket of `p_m` was not as expected.
   */
  HC_STATUS_ROOT_CHECK_FAILED = 3,
  /**
   * `alpha` admits no `gamma` with a nonnegative quadratic margin.
   */
  HC_STATUS_NO_GAMMA_WINDOW = 4,
  /**
   * The integrator left the barrier funnel or its step underflowed.
   */
  HC_STATUS_INTEGRATION_FAILED = 5,
  /**
   * The query point is too close to the cone or an axis.
   */
  HC_STATUS_NEAR_SINGULARITY = 6,
  HC_STATUS_BUFFER_TOO_SMALL = 7,
  HC_STATUS_INTERNAL = 8,
} HcStatus;

/**
 * Isolated and rounded `alpha_m`.
 */
typedef struct HcAlpha HcAlpha;

/**
 * Both branches of a solved foliation.
 */
typedef struct HcFoliation HcFoliation;

/**
 * Certificate figures for one branch of a foliation.
 */
typedef struct HcBranchReport {
  double containment;
  double ode_residual;
  double el_residual;
  double pole_estimate;
  double pole_error;
} HcBranchReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *hc_status_message(enum HcStatus status);

/**
 * Computes `alpha_m` to `digits` decimals. On success `*out_alpha` owns a
 * handle to release with [`hc_alpha_free`].
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_alpha_compute(uint64_t m, uint32_t digits, struct HcAlpha **out_alpha);

/**
 * Copies the rounded decimal string, NUL-terminated, into `buf`.
 * `*needed` receives the buffer size required, terminator included, even
 * when the status is [`HcStatus::BufferTooSmall`].
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_alpha_decimal(const struct HcAlpha *alpha, char *buf, size_t len, size_t *needed);

/**
 * Ends of the rational isolating interval of `alpha_m`, each converted to
 * the nearest double.
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_alpha_bounds(const struct HcAlpha *alpha, double *lo, double *hi);

/**
 * # Safety
 * The handle is null or came from the matching constructor and has not
 * been freed.
 */
void hc_alpha_free(struct HcAlpha *alpha);

/**
 * Number of positive roots of `p_m`.
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_positive_root_count(uint64_t m, size_t *count);

/**
 * `p_m(2/m) < 0 < p_m(12/m)`.
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_verify_bracket(uint64_t m, bool *holds);

/**
 * Whether the product cone over `S^k x S^h` is area minimizing.
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_lawson_check(uint64_t k, uint64_t h, bool *minimizing);

/**
 * Whether `alpha = num/den` meets the explicit sub-calibration bound.
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_subcal_bound(uint64_t m, int64_t num, int64_t den, bool *holds);

/**
 * Closed-form divergence of the sub-calibration field at `(radial, height)`.
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_div_xi(uint64_t m, double alpha, double radial, double height, double *div);

/**
 * Solves the foliation at `alpha = num/den` with `gamma` taken from the
 * certified window. Release the handle with [`hc_foliation_free`].
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_foliation_solve(uint64_t m,
                                 int64_t num,
                                 int64_t den,
                                 double eps,
                                 double tol,
                                 size_t n,
                                 struct HcFoliation **out_fol);

/**
 * Sample count of one branch.
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_foliation_len(const struct HcFoliation *fol, enum HcBranch branch, size_t *len);

/**
 * Copies the angle, `w` and `v` samples of a branch into three arrays of
 * `cap` doubles each. Any of the arrays may be null to skip it.
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_foliation_copy(const struct HcFoliation *fol,
                                enum HcBranch branch,
                                double *t,
                                double *w,
                                double *v,
                                size_t cap);

/**
 * Certificate figures of one branch.
 *
 * # Safety
 * Pointer arguments are null or valid for their documented use.
 */
enum HcStatus hc_foliation_report(const struct HcFoliation *fol,
                                  enum HcBranch branch,
                                  struct HcBranchReport *report);

/**
 * # Safety
 * The handle is null or came from the matching constructor and has not
 * been freed.
 */
void hc_foliation_free(struct HcFoliation *fol);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HYPERCONE_H */
