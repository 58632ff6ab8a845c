#ifndef COUPLER_H
#define COUPLER_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define CPL_MODE_A 0

#define CPL_MODE_B1 1

#define CPL_MODE_B2 2

/**
 * Number of values written by [`cpl_tripartite`].
 */
#define CPL_TRIPARTITE_LEN 7

typedef enum CplStatus {
  CPL_STATUS_OK = 0,
  CPL_STATUS_NULL_POINTER = 1,
  CPL_STATUS_INVALID_ARGUMENT = 2,
  CPL_STATUS_INVALID_PARAMS = 3,
  CPL_STATUS_GUARD_BAND = 4,
  CPL_STATUS_INVALID_ORDER = 5,
  CPL_STATUS_INVALID_CUTOFFS = 6,
  CPL_STATUS_CUTOFF_TOO_TIGHT = 7,
  CPL_STATUS_STEP_TOO_COARSE = 8,
  CPL_STATUS_WORD_TOO_LONG = 9,
  CPL_STATUS_CONFIG = 10,
  CPL_STATUS_IO = 11,
  CPL_STATUS_INTERNAL = 12,
  CPL_STATUS_PANIC = 13,
} CplStatus;

/**
 * Opaque coupler parameters.
 */
typedef struct CplParams CplParams;

/**
 * Opaque truncated three-mode state.
 */
typedef struct CplState CplState;

typedef struct CplComplex {
  double re;
  double im;
} CplComplex;

/**
 * Evolution coefficients at length `z`; index `i` holds `f_{i+1}` and so on.
 */
typedef struct CplCoefficients {
  struct CplComplex f[4];
  struct CplComplex g[4];
  struct CplComplex h[4];
  double z;
} CplCoefficients;

/**
 * Coherent amplitudes of the three input modes.
 */
typedef struct CplCoherentInput {
  struct CplComplex alpha;
  struct CplComplex beta;
  struct CplComplex gamma;
} CplCoherentInput;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *cpl_last_error_message(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum CplStatus cpl_params_new(struct CplComplex k,
                              struct CplComplex gamma_nl,
                              double delta_k,
                              struct CplParams **out);

/**
 * # Safety
 * `params` must come from [`cpl_params_new`] and not be freed twice. Null is ignored.
 */
void cpl_params_free(struct CplParams *params);

/**
 * # Safety
 * `params` must be a live handle; `out` must be valid for writes.
 */
enum CplStatus cpl_coefficients(const struct CplParams *params,
                                double z,
                                struct CplCoefficients *out);

/**
 * Mean photon numbers of `a`, `b1`, `b2` at length `z`, written to `out[0..3]`.
 *
 * # Safety
 * `params` must be a live handle, `input` readable and `out` valid for 3 writes.
 */
enum CplStatus cpl_mean_photon_numbers(const struct CplParams *params,
                                       const struct CplCoherentInput *input,
                                       double z,
                                       double *out);

/**
 * Amplitude-squared squeezing of one mode.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum CplStatus cpl_amp_sq(const struct CplParams *params,
                          const struct CplCoherentInput *input,
                          double z,
                          uint32_t mode_index,
                          double *out_y1,
                          double *out_y2);

/**
 * Higher-order antibunching of order `n >= 2`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum CplStatus cpl_hoa(const struct CplParams *params,
                       const struct CplCoherentInput *input,
                       double z,
                       uint32_t mode_index,
                       uint32_t n,
                       double *out);

/**
 * HZ pair for modes `a` and `b1`.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum CplStatus cpl_hz(const struct CplParams *params,
                      const struct CplCoherentInput *input,
                      double z,
                      uint32_t m,
                      uint32_t n,
                      double *out_e,
                      double *out_e_prime);

/**
 * Tripartite values: `E`, `E'` for the splits `b2|ab1`, `a|b1b2`, `b1|ab2`,
 * then the full-separability test. `out` holds [`CPL_TRIPARTITE_LEN`] values.
 *
 * # Safety
 * Pointer arguments must be valid.
 */
enum CplStatus cpl_tripartite(const struct CplParams *params,
                              const struct CplCoherentInput *input,
                              double z,
                              double *out);

/**
 * Coherent product state truncated at the given photon-number cutoffs.
 *
 * # Safety
 * `input` must be readable and `out` valid for writes.
 */
enum CplStatus cpl_state_coherent(const struct CplCoherentInput *input,
                                  size_t n_a_max,
                                  size_t n_b1_max,
                                  size_t n_b2_max,
                                  struct CplState **out);

/**
 * Propagates the state in place over length `z`. `out_norm_drift` may be null.
 *
 * # Safety
 * `state` and `params` must be live handles.
 */
enum CplStatus cpl_state_evolve(struct CplState *state,
                                const struct CplParams *params,
                                double z,
                                double *out_norm_drift);

/**
 * Normally ordered moment `⟨a†^ca b1†^cb1 b2†^cb2 a^na b1^nb1 b2^nb2⟩`.
 * `create` and `annihilate` each point to three counts.
 *
 * # Safety
 * `state` must be a live handle, `create` and `annihilate` readable for 3 values.
 */
enum CplStatus cpl_state_moment(const struct CplState *state,
                                const uint32_t *create,
                                const uint32_t *annihilate,
                                struct CplComplex *out);

/**
 * Hilbert-space dimension of the state, or 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t cpl_state_dim(const struct CplState *state);

/**
 * # Safety
 * `state` must come from [`cpl_state_coherent`] and not be freed twice. Null is ignored.
 */
void cpl_state_free(struct CplState *state);

/**
 * Runs a sweep described by config text and returns the CSV as a new string.
 * Output paths named in the config are ignored.
 *
 * # Safety
 * `config` must be a NUL-terminated string; `out` valid for writes.
 */
enum CplStatus cpl_sweep_csv(const char *config, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void cpl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COUPLER_H */
