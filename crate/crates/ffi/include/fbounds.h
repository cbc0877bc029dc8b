#ifndef FBOUNDS_H
#define FBOUNDS_H

/* Generated by cbindgen from the fbounds-ffi crate. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a fallible call. Anything other than `Ok` leaves a message
 * readable through [`fb_last_error`].
 */
typedef enum FbStatus {
  /**
   * The call succeeded.
   */
  FbStatus_Ok = 0,
  /**
   * The input was rejected (bad state, bad dimensions, bad domain).
   */
  FbStatus_InvalidArgument = 1,
  /**
   * A numerical routine failed or two evaluation routes disagreed.
   */
  FbStatus_Numerical = 2,
  /**
   * A required pointer argument was null.
   */
  FbStatus_NullPointer = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  FbStatus_Utf8 = 4,
  /**
   * An internal invariant was violated; the library state is unharmed.
   */
  FbStatus_Panic = 5,
} FbStatus;

/**
 * A profiled reference state: the pure state itself plus everything the
 * bounds need about it. Opaque to C.
 */
typedef struct FbProfile FbProfile;

/**
 * An owned quantum state, pure or mixed. Opaque to C.
 */
typedef struct FbState FbState;

/**
 * All outputs of the entanglement-bound evaluation. `*_raw` fields can be
 * negative (the measurement certifies nothing); the unsuffixed fields are
 * clamped to zero.
 */
typedef struct FbGmeBounds {
  double fidelity;
  double s1_prime;
  size_t m_prime;
  double s;
  double witness_value;
  double cren_raw;
  double cren;
  double concurrence_raw;
  double concurrence;
  double gconcurrence_raw;
  double gconcurrence;
  double geometric_raw;
  double geometric;
} FbGmeBounds;

/**
 * All outputs of the coherence-bound evaluation, in the computational
 * basis. `formation_branch` is 1 for the entropy branch and 2 for the
 * linear branch of the formation bound.
 */
typedef struct FbCoherenceBounds {
  double fidelity;
  double d_max_sq;
  size_t m;
  double d;
  double witness_value;
  double l1_raw;
  double l1;
  double geometric_raw;
  double geometric;
  double formation_raw;
  double formation;
  uint8_t formation_branch;
} FbCoherenceBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *fb_last_error(void);

/**
 * Library version as a static string. Never freed by the caller.
 */
const char *fb_version(void);

/**
 * Builds a state from a factory spec such as `ghz:4`, `w:3`,
 * `cluster:5` or `wnoise:ghz:3:p=0.9`, or from a path to a state file.
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string and `out` a valid pointer.
 * On success `*out` owns the state and must be released with
 * [`fb_state_free`].
 */
enum FbStatus fb_state_from_spec(const char *spec, struct FbState **out);

/**
 * Reads a state file (JSON with `dims`, `kind`, `data`).
 *
 * # Safety
 * Same contract as [`fb_state_from_spec`].
 */
enum FbStatus fb_state_from_file(const char *path, struct FbState **out);

/**
 * Builds a pure state from raw amplitudes in the computational basis,
 * ordered with the first party as the most significant digit. `im` may be
 * null for a real state. The amplitude count must equal the product of the
 * local dimensions and the vector must already be normalized (a deviation
 * below 1e-9 is corrected silently).
 *
 * # Safety
 * `dims` must point to `num_parties` entries, `re` (and `im` when non-null)
 * to `num_amplitudes` entries, and `out` must be a valid pointer. On
 * success `*out` must be released with [`fb_state_free`].
 */
enum FbStatus fb_state_pure_new(const uint32_t *dims,
                                size_t num_parties,
                                const double *re,
                                const double *im,
                                size_t num_amplitudes,
                                struct FbState **out);

/**
 * Number of parties of the state, or 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle from this library.
 */
size_t fb_state_num_parties(const struct FbState *state);

/**
 * Total Hilbert-space dimension of the state, or 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle from this library.
 */
size_t fb_state_dim(const struct FbState *state);

/**
 * True when the handle holds a pure state (false for null).
 *
 * # Safety
 * `state` must be null or a live handle from this library.
 */
bool fb_state_is_pure(const struct FbState *state);

/**
 * Fidelity `<phi| rho |phi>` between a state and a pure reference.
 *
 * # Safety
 * `state` and `phi` must be live handles from this library and `out` a
 * valid pointer. `phi` must hold a pure state.
 */
enum FbStatus fb_state_fidelity(const struct FbState *state,
                                const struct FbState *phi,
                                double *out);

/**
 * Releases a state handle. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle produced by this library that has not
 * been freed yet.
 */
void fb_state_free(struct FbState *state);

/**
 * Profiles a pure reference state: Schmidt spectra over all bipartitions
 * for the entanglement bounds, and the largest amplitude in the
 * computational basis for the coherence bounds.
 *
 * # Safety
 * `phi` must be a live handle holding a pure state and `out` a valid
 * pointer. On success `*out` must be released with [`fb_profile_free`].
 */
enum FbStatus fb_profile_new(const struct FbState *phi, struct FbProfile **out);

/**
 * Largest Schmidt coefficient squared over all bipartitions, or NaN for a
 * null handle.
 *
 * # Safety
 * `profile` must be null or a live handle from this library.
 */
double fb_profile_s1_prime(const struct FbProfile *profile);

/**
 * Smallest one-sided dimension maximized over bipartitions, or 0 for a
 * null handle.
 *
 * # Safety
 * `profile` must be null or a live handle from this library.
 */
size_t fb_profile_m_prime(const struct FbProfile *profile);

/**
 * Largest amplitude modulus squared in the computational basis, or NaN for
 * a null handle.
 *
 * # Safety
 * `profile` must be null or a live handle from this library.
 */
double fb_profile_d_max_sq(const struct FbProfile *profile);

/**
 * Hilbert-space dimension used by the coherence bounds, or 0 for a null
 * handle.
 *
 * # Safety
 * `profile` must be null or a live handle from this library.
 */
size_t fb_profile_m(const struct FbProfile *profile);

/**
 * Releases a profile handle. Null is ignored.
 *
 * # Safety
 * `profile` must be null or a handle produced by this library that has not
 * been freed yet.
 */
void fb_profile_free(struct FbProfile *profile);

/**
 * Entanglement bounds from an externally measured fidelity.
 *
 * # Safety
 * `profile` must be a live handle and `out` a valid pointer.
 */
enum FbStatus fb_gme_bounds_from_fidelity(const struct FbProfile *profile,
                                          double fidelity,
                                          struct FbGmeBounds *out);

/**
 * Entanglement bounds for a concrete state; the fidelity with the profiled
 * reference is computed internally.
 *
 * # Safety
 * `profile` and `state` must be live handles and `out` a valid pointer.
 */
enum FbStatus fb_gme_bounds(const struct FbProfile *profile,
                            const struct FbState *state,
                            struct FbGmeBounds *out);

/**
 * Coherence bounds from an externally measured fidelity, in the
 * computational basis.
 *
 * # Safety
 * `profile` must be a live handle and `out` a valid pointer.
 */
enum FbStatus fb_coherence_bounds_from_fidelity(const struct FbProfile *profile,
                                                double fidelity,
                                                struct FbCoherenceBounds *out);

/**
 * Coherence bounds for a concrete state; the fidelity with the profiled
 * reference is computed internally.
 *
 * # Safety
 * `profile` and `state` must be live handles and `out` a valid pointer.
 */
enum FbStatus fb_coherence_bounds(const struct FbProfile *profile,
                                  const struct FbState *state,
                                  struct FbCoherenceBounds *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FBOUNDS_H */
