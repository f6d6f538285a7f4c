#ifndef EXTROPY_KIT_H
#define EXTROPY_KIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call. Zero is success.
typedef enum EkStatus {
  EK_STATUS_OK = 0,
  EK_STATUS_NULL_POINTER = 1,
  EK_STATUS_INVALID_UTF8 = 2,
  EK_STATUS_PANIC = 3,
  EK_STATUS_INVALID_PARAMETER = 10,
  EK_STATUS_OUT_OF_SUPPORT = 11,
  EK_STATUS_DEGENERATE_DENOMINATOR = 12,
  EK_STATUS_DIVERGED = 13,
  EK_STATUS_NOT_CONVERGED = 14,
  EK_STATUS_UNBOUNDED_SUPPORT = 15,
  EK_STATUS_INVALID_INDEX = 16,
  EK_STATUS_DOMAIN_ERROR = 17,
  EK_STATUS_TOO_FEW_OBSERVATIONS = 18,
  EK_STATUS_NEGATIVE_VALUE = 19,
  EK_STATUS_NON_FINITE_VALUE = 20,
  EK_STATUS_INVALID_LEVEL = 21,
  EK_STATUS_EMPTY_GRID = 22,
  EK_STATUS_ZERO_DENOMINATOR = 23,
  EK_STATUS_EVALUATION_FAILURE = 24,
  EK_STATUS_PARSE = 25,
  EK_STATUS_IO = 26,
} EkStatus;

// How a measure was evaluated.
typedef enum EkMethod {
  EK_METHOD_CLOSED_FORM = 0,
  EK_METHOD_QUADRATURE = 1,
  EK_METHOD_EMPIRICAL = 2,
} EkMethod;

// Opaque lifetime distribution.
typedef struct EkDistribution EkDistribution;

// Opaque validated sample.
typedef struct EkSample EkSample;

// Opaque weight function.
typedef struct EkWeight EkWeight;

// A measure value in both conventions.
typedef struct EkMeasure {
  double signed_value;
  double magnitude;
  // Bound on the absolute error of `signed_value`.
  double error_bound;
  enum EkMethod method;
} EkMeasure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static nul-terminated string.
const char *ek_version(void);

// Message of the last failing call on this thread, or an empty string. The
// pointer stays valid until the next failing call on the same thread.
const char *ek_last_error_message(void);

// Parses a distribution such as `"weibull:k=1,h=2"`.
//
// # Safety
// `spec` must be a nul-terminated string and `out_dist` a valid pointer.
enum EkStatus ek_distribution_parse(const char *spec, struct EkDistribution **out_dist);

// Releases a distribution. Null is ignored.
//
// # Safety
// `dist` must come from [`ek_distribution_parse`] and not be freed twice.
void ek_distribution_free(struct EkDistribution *dist);

// Survival function of `dist` at `x`.
//
// # Safety
// `dist` must be a live handle and `out_value` a valid pointer.
enum EkStatus ek_distribution_sf(const struct EkDistribution *dist, double x, double *out_value);

// Parses a weight such as `"identity"`, `"const:2"` or `"pow:m=3"`.
//
// # Safety
// `spec` must be a nul-terminated string and `out_weight` a valid pointer.
enum EkStatus ek_weight_parse(const char *spec, struct EkWeight **out_weight);

// Releases a weight. Null is ignored.
//
// # Safety
// `weight` must come from [`ek_weight_parse`] and not be freed twice.
void ek_weight_free(struct EkWeight *weight);

// Copies and validates `len` observations (finite, non-negative, at least 2).
//
// # Safety
// `values` must point to `len` doubles and `out_sample` be a valid pointer.
enum EkStatus ek_sample_new(const double *values, size_t len, struct EkSample **out_sample);

// Number of observations in `sample`, or 0 for null.
//
// # Safety
// `sample` must be null or a live handle.
size_t ek_sample_len(const struct EkSample *sample);

// Releases a sample. Null is ignored.
//
// # Safety
// `sample` must come from [`ek_sample_new`] and not be freed twice.
void ek_sample_free(struct EkSample *sample);

// Static measure of the minimum (`kind = "residual-min"`) or maximum
// (`kind = "past-max"`) of `n` draws, with default quadrature settings.
//
// # Safety
// Handles must be live, `kind` nul-terminated and `out_measure` valid.
enum EkStatus ek_measure(const char *kind,
                         const struct EkDistribution *dist,
                         const struct EkWeight *weight,
                         size_t n,
                         struct EkMeasure *out_measure);

// Dynamic curve at `len` strictly increasing times. `kind` is one of
// `residual-min`, `past-max`, `residual-kn`, `past-kn`; `k` is used only by
// the order-statistic kinds. Points that fail to evaluate are written as NaN
// and counted in `out_failed` (which may be null).
//
// # Safety
// `t` and `out_values` must each hold `len` doubles; handles must be live.
enum EkStatus ek_dynamic(const char *kind,
                         const struct EkDistribution *dist,
                         const struct EkWeight *weight,
                         size_t n,
                         size_t k,
                         const double *t,
                         size_t len,
                         double *out_values,
                         size_t *out_failed);

// Plug-in estimate from a sample; `kind` is `residual-min` or `past-max`.
//
// # Safety
// Handles must be live, `kind` nul-terminated and `out_measure` valid.
enum EkStatus ek_estimate(const char *kind,
                          const struct EkSample *sample,
                          const struct EkWeight *weight,
                          size_t n,
                          struct EkMeasure *out_measure);

// Percentile bootstrap interval for the signed estimate. Deterministic for a
// given `seed`.
//
// # Safety
// Handles must be live, `kind` nul-terminated and both outputs valid.
enum EkStatus ek_bootstrap(const char *kind,
                           const struct EkSample *sample,
                           const struct EkWeight *weight,
                           size_t n,
                           size_t replicates,
                           double level,
                           uint64_t seed,
                           double *out_lower,
                           double *out_upper);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXTROPY_KIT_H */
