#ifndef BAILEY_ZETA_H
#define BAILEY_ZETA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BzOutcome {
  BZ_OUTCOME_VERIFIED = 0,
  BZ_OUTCOME_MISMATCH = 1,
  BZ_OUTCOME_INCONCLUSIVE = 2,
} BzOutcome;

typedef enum BzStatus {
  BZ_STATUS_OK = 0,
  BZ_STATUS_NULL_ARGUMENT = 1,
  BZ_STATUS_INVALID_UTF8 = 2,
  BZ_STATUS_INVALID_ARGUMENT = 3,
  BZ_STATUS_PARSE_ERROR = 4,
  BZ_STATUS_COMPUTATION_FAILED = 5,
  BZ_STATUS_PANIC = 6,
} BzStatus;

// Precision and summation settings.
typedef struct BzContext BzContext;

// Result of an outer-limit run.
typedef struct BzReport BzReport;

// An arithmetic weight.
typedef struct BzWeight BzWeight;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until
// the next call into the library on the same thread.
const char *bz_last_error(void);

void bz_string_free(char *s);

// `precision_bits` is the mantissa size of reported values (at least 64).
// `pairwise` selects pairwise instead of ascending sequential summation.
enum BzStatus bz_context_new(uint32_t precision_bits, bool pairwise, struct BzContext **out_ctx);

void bz_context_free(struct BzContext *ctx);

// `descriptor` is a preset name (`trivial`, `alternating`, `mod4`), a JSON
// descriptor, or a path to a JSON descriptor file.
enum BzStatus bz_weight_new(const char *descriptor, struct BzWeight **out_weight);

void bz_weight_free(struct BzWeight *weight);

// `a_n(s)` rounded to double. `s` is text such as `2` or `3/2+1i`.
enum BzStatus bz_a_n(const struct BzContext *ctx,
                     const struct BzWeight *weight,
                     const char *s,
                     uint64_t n,
                     double *out_re,
                     double *out_im);

// Runs the outer limit over `schedule[0..len]`. `accel` is
// `polynomial[:k]`, `asymptotic[:k]` or `none`; null means the default.
enum BzStatus bz_outer_limit(const struct BzContext *ctx,
                             const struct BzWeight *weight,
                             const char *s,
                             const uint64_t *schedule,
                             size_t len,
                             const char *accel,
                             struct BzReport **out_report);

void bz_report_free(struct BzReport *report);

// Extrapolated `L(s, chi)/sqrt(pi)`, its unscaled value and error estimate.
// Any output pointer may be null.
enum BzStatus bz_report_value(const struct BzReport *report,
                              double *out_re,
                              double *out_im,
                              double *out_unscaled_re,
                              double *out_unscaled_im,
                              double *out_err_est);

enum BzStatus bz_report_record_count(const struct BzReport *report, size_t *out_count);

enum BzStatus bz_report_record(const struct BzReport *report,
                               size_t index,
                               uint64_t *out_n,
                               double *out_re,
                               double *out_im,
                               double *out_err_est);

// Full-precision JSON rendering. Release the string with `bz_string_free`.
enum BzStatus bz_report_to_json(const struct BzReport *report, bool timings, char **out_json);

// Named constant over the default schedule: `catalan`, `zeta2` and
// `beta4` give `L/sqrt(pi)`, `gamma` gives `gamma/sqrt(pi)`.
enum BzStatus bz_constant(const struct BzContext *ctx,
                          const char *name,
                          double *out_value,
                          double *out_err_est);

// Verifies a TOML pair definition under each of its `a` candidates.
// `out_n` and `out_power` locate the first mismatch (`-1` when absent).
enum BzStatus bz_verify_pair_file(const char *path,
                                  enum BzOutcome *out_outcome,
                                  int64_t *out_n,
                                  int64_t *out_power);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BAILEY_ZETA_H */
