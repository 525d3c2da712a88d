#ifndef KDIST_H
#define KDIST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KdistStatus {
  KDIST_STATUS_OK = 0,
  KDIST_STATUS_NULL_POINTER = 1,
  KDIST_STATUS_DOMAIN = 2,
  KDIST_STATUS_NOT_CONVERGED = 3,
  KDIST_STATUS_UNDERFLOW = 4,
  KDIST_STATUS_PANIC = 5,
} KdistStatus;

typedef enum KdistStrategy {
  KDIST_STRATEGY_METHOD1 = 0,
  KDIST_STRATEGY_METHOD2 = 1,
  KDIST_STRATEGY_HYBRID = 2,
  KDIST_STRATEGY_AUTO = 3,
} KdistStrategy;

typedef enum KdistStrategyUsed {
  KDIST_STRATEGY_USED_METHOD1 = 0,
  KDIST_STRATEGY_USED_METHOD2 = 1,
  KDIST_STRATEGY_USED_HYBRID = 2,
  KDIST_STRATEGY_USED_CLOSED_FORM = 3,
} KdistStrategyUsed;

// Opaque evaluation options.
typedef struct KdistOptions KdistOptions;

// Evaluation diagnostics; `value` is the CDF.
typedef struct KdistReport {
  double value;
  uint64_t iterations;
  double achieved_bound;
  uint64_t start_index;
  enum KdistStrategyUsed strategy_used;
  bool underflow_adjusted;
  bool converged;
} KdistReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// New options with library defaults. Free with [`kdist_options_free`].
struct KdistOptions *kdist_options_new(void);

// # Safety
// `opts` must be null or a handle from [`kdist_options_new`] not yet freed.
void kdist_options_free(struct KdistOptions *opts);

// # Safety
// `opts` must be a live handle.
enum KdistStatus kdist_options_set_tolerance(struct KdistOptions *opts, double tolerance);

// `strategy` is one of the [`KdistStrategy`] values.
//
// # Safety
// `opts` must be a live handle.
enum KdistStatus kdist_options_set_strategy(struct KdistOptions *opts, int32_t strategy);

// # Safety
// `opts` must be a live handle.
enum KdistStatus kdist_options_set_max_iterations(struct KdistOptions *opts,
                                                  uint64_t max_iterations);

// # Safety
// `opts` must be a live handle.
enum KdistStatus kdist_options_set_hybrid_threshold(struct KdistOptions *opts, double threshold);

// `Pr(K'_{q,r}(a) < x)`.
//
// # Safety
// `opts` null or live; `out` valid for writes.
enum KdistStatus kdist_kprime_cdf(double q,
                                  double r,
                                  double a,
                                  double x,
                                  const struct KdistOptions *opts,
                                  struct KdistReport *out);

// `Pr(K²_{p,q,r}(a²) < x)`.
//
// # Safety
// `opts` null or live; `out` valid for writes.
enum KdistStatus kdist_ksquare_cdf(double p,
                                   double q,
                                   double r,
                                   double a2,
                                   double x,
                                   const struct KdistOptions *opts,
                                   struct KdistReport *out);

// # Safety
// `opts` null or live; `out` valid for writes.
enum KdistStatus kdist_kprime_quantile(double q,
                                       double r,
                                       double a,
                                       double prob,
                                       const struct KdistOptions *opts,
                                       double *out);

// # Safety
// `opts` null or live; `out` valid for writes.
enum KdistStatus kdist_ksquare_quantile(double p,
                                        double q,
                                        double r,
                                        double a2,
                                        double prob,
                                        const struct KdistOptions *opts,
                                        double *out);

// Noncentrality `a` with `Pr(K'_{q,r}(a) < x) = prob`.
//
// # Safety
// `opts` null or live; `out` valid for writes.
enum KdistStatus kdist_kprime_ncp_solve(double q,
                                        double r,
                                        double x,
                                        double prob,
                                        const struct KdistOptions *opts,
                                        double *out);

// # Safety
// `out` valid for writes.
enum KdistStatus kdist_student_t_cdf(double x, double df, double *out);

double kdist_normal_cdf(double x);

// # Safety
// `out` valid for writes.
enum KdistStatus kdist_p_rep(double t1, uint64_t n1, double *out);

// `Pr(t > threshold)` for a replication; with `below` set, `Pr(t < threshold)`.
//
// # Safety
// `opts` null or live; `out` valid for writes.
enum KdistStatus kdist_prob_replication(double t1,
                                        uint64_t n1,
                                        uint64_t n,
                                        double threshold,
                                        bool below,
                                        const struct KdistOptions *opts,
                                        double *out);

// `Pr(F > threshold)` under the predictive F distribution.
//
// # Safety
// `opts` null or live; `out` valid for writes.
enum KdistStatus kdist_predictive_f_sf(double f0,
                                       uint64_t g,
                                       double n0,
                                       double n,
                                       double threshold,
                                       const struct KdistOptions *opts,
                                       double *out);

// # Safety
// `opts` null or live; `out` valid for writes.
enum KdistStatus kdist_corr_sampling_cdf(uint64_t n,
                                         double rho,
                                         double r_obs,
                                         const struct KdistOptions *opts,
                                         double *out);

// # Safety
// `opts` null or live; `lo` and `hi` valid for writes.
enum KdistStatus kdist_corr_confidence_limits(uint64_t n,
                                              double r_obs,
                                              double level,
                                              const struct KdistOptions *opts,
                                              double *lo,
                                              double *hi);

// # Safety
// `opts` null or live; `out` valid for writes.
enum KdistStatus kdist_mcorr_sampling_cdf(uint64_t n,
                                          uint64_t m,
                                          double rho2,
                                          double r2_obs,
                                          const struct KdistOptions *opts,
                                          double *out);

// Copies the calling thread's last error message, NUL-terminated and
// truncated to `len` bytes, into `buf`. Returns the full message length
// excluding the terminator, or 0 when there is no message. `buf` may be
// null to query the length.
//
// # Safety
// `buf` null or valid for `len` bytes of writes.
size_t kdist_last_error_message(char *buf, size_t len);

// Static description of a status code.
const char *kdist_status_string(enum KdistStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KDIST_H */
