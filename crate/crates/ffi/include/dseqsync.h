#ifndef DSEQSYNC_H
#define DSEQSYNC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DsStatus {
  DS_STATUS_OK = 0,
  DS_STATUS_INVALID_PARAMETER = 1,
  DS_STATUS_LENGTH_MISMATCH = 2,
  DS_STATUS_UNDEFINED = 3,
  DS_STATUS_DEGENERATE_CHANNELS = 4,
  DS_STATUS_ON_NULL = 5,
  DS_STATUS_OPTIMIZATION_DEGENERATE = 6,
  DS_STATUS_CONFIG = 7,
  DS_STATUS_IO = 8,
  DS_STATUS_NULL_POINTER = 9,
  DS_STATUS_PANIC = 10,
} DsStatus;

// Auxiliary-sequence estimator for one `{θ, δ}` design.
typedef struct DsAuxEstimator DsAuxEstimator;

// Sum/difference estimator for one `η`.
typedef struct DsSumDiffEstimator DsSumDiffEstimator;

// ZC estimator holding the mapped time-domain reference symbol.
typedef struct DsZcEstimator DsZcEstimator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code.
const char *ds_status_str(enum DsStatus status);

// `θ` in radians per sample, `δ = 2k′π/N`.
//
// # Safety
// `out` must be a valid pointer.
enum DsStatus ds_aux_estimator_new(double theta,
                                   size_t k_prime,
                                   size_t n,
                                   struct DsAuxEstimator **out);

// # Safety
// `h` must come from `ds_aux_estimator_new` and not be used afterwards.
void ds_aux_estimator_free(struct DsAuxEstimator *h);

// Writes the two auxiliary time-domain sequences, `len` must equal `N`.
//
// # Safety
// `h` valid; `d0`, `d1` hold `2·len` doubles.
enum DsStatus ds_aux_sequences(const struct DsAuxEstimator *h, double *d0, double *d1, size_t len);

// `μ̂` from the two received slots of one antenna.
//
// # Safety
// `h` valid; `q0`, `q1` hold `2·len` doubles; `mu_hat` writable.
enum DsStatus ds_aux_estimate(const struct DsAuxEstimator *h,
                              const double *q0,
                              const double *q1,
                              size_t len,
                              double *mu_hat);

// `η` in radians per sample.
//
// # Safety
// `out` must be a valid pointer.
enum DsStatus ds_sumdiff_estimator_new(double eta, size_t n, struct DsSumDiffEstimator **out);

// # Safety
// `h` must come from `ds_sumdiff_estimator_new` and not be used afterwards.
void ds_sumdiff_estimator_free(struct DsSumDiffEstimator *h);

// # Safety
// `h` valid; `d_sum`, `d_diff` hold `2·len` doubles.
enum DsStatus ds_sumdiff_sequences(const struct DsSumDiffEstimator *h,
                                   double *d_sum,
                                   double *d_diff,
                                   size_t len);

// # Safety
// `h` valid; `q_sum`, `q_diff` hold `2·len` doubles; `mu_hat` writable.
enum DsStatus ds_sumdiff_estimate(const struct DsSumDiffEstimator *h,
                                  const double *q_sum,
                                  const double *q_diff,
                                  size_t len,
                                  double *mu_hat);

// # Safety
// `out` must be a valid pointer.
enum DsStatus ds_zc_estimator_new(size_t n_zc, size_t root, size_t n, struct DsZcEstimator **out);

// # Safety
// `h` must come from `ds_zc_estimator_new` and not be used afterwards.
void ds_zc_estimator_free(struct DsZcEstimator *h);

// # Safety
// `h` valid; `symbol` holds `2·len` doubles.
enum DsStatus ds_zc_symbol(const struct DsZcEstimator *h, double *symbol, size_t len);

// # Safety
// `h` valid; `q` holds `2·len` doubles; `mu_hat` writable.
enum DsStatus ds_zc_estimate(const struct DsZcEstimator *h,
                             const double *q,
                             size_t len,
                             double *mu_hat);

// Quantizer NMSE; `bits = 0` means infinite resolution.
//
// # Safety
// `out` must be a valid pointer.
enum DsStatus ds_kappa_for_bits(uint8_t bits, double *out);

// Auxiliary-design `var(μ̂)`; `+∞` at formula singularities.
//
// # Safety
// `out` must be a valid pointer.
enum DsStatus ds_lemma1_variance(size_t n,
                                 double kappa,
                                 double theta,
                                 double delta,
                                 double mu,
                                 double gamma,
                                 double alpha,
                                 double *out);

// Sum/difference-design `var(μ̂)`; `+∞` at formula singularities.
//
// # Safety
// `out` must be a valid pointer.
enum DsStatus ds_lemma2_variance(size_t n,
                                 double kappa,
                                 double eta,
                                 double mu,
                                 double gamma,
                                 double beta,
                                 double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DSEQSYNC_H */
