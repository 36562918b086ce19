#ifndef WEIERFM_H
#define WEIERFM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call. The first four match the command-line exit codes.
 */
typedef enum WfStatus {
  WF_STATUS_OK = 0,
  /**
   * Malformed or inconsistent input.
   */
  WF_STATUS_INPUT_ERROR = 1,
  /**
   * A hypothesis of the requested result does not hold.
   */
  WF_STATUS_HYPOTHESIS_VIOLATION = 2,
  /**
   * An internal consistency check failed.
   */
  WF_STATUS_INTERNAL_ERROR = 3,
  /**
   * A required pointer argument was null.
   */
  WF_STATUS_NULL_POINTER = 4,
  /**
   * The engine panicked; the call had no effect.
   */
  WF_STATUS_PANIC = 5,
} WfStatus;

/**
 * A surface model together with its default ample class, if any.
 */
typedef struct WfModel WfModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *wf_version(void);

/**
 * Message for the last failed call on this thread, or null after a
 * successful one. Valid until the next call on this thread.
 */
const char *wf_last_error(void);

/**
 * Releases a string returned through an `out` parameter. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void wf_string_free(char *s);

/**
 * Loads a built-in surface: `k3_quartic`, `enriques` or `general_demo`.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a valid pointer.
 */
enum WfStatus wf_model_from_preset(const char *name, struct WfModel **out);

/**
 * Loads a surface model from its JSON form. Such a model has no default
 * ample class.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum WfStatus wf_model_from_json(const char *json, struct WfModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must come from this library and not have been freed.
 */
void wf_model_free(struct WfModel *model);

/**
 * JSON form of a model.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_model_to_json(const struct WfModel *model, char **out);

/**
 * Default polarization `ω = Θ + p*H_S` as JSON, for preset models only.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_model_default_polarization(const struct WfModel *model, char **out);

/**
 * Transform of `O_X(mΘ) ⊗ p*N`: character, WIT type and local freeness.
 * `twist_json` (a JSON array of rationals) and `kernel` (`"standard"` or
 * `"untwisted"`) may be null.
 *
 * # Safety
 * Pointers must be valid; optional ones may be null.
 */
enum WfStatus wf_transform(const struct WfModel *model,
                           int64_t m,
                           const char *twist_json,
                           const char *kernel_name,
                           char **out);

/**
 * Slope `μ_ω` of a character, written as a `"p/q"` string.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_slope(const struct WfModel *model,
                       const char *char_json,
                       const char *pol_json,
                       char **out);

/**
 * Character of the derived dual.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_dual_char(const char *char_json, char **out);

/**
 * Character-level check that duality commutes with the transform.
 *
 * # Safety
 * Pointers must be valid; `twist_json` and `kernel_name` may be null.
 */
enum WfStatus wf_commutativity_check(const struct WfModel *model,
                                     int64_t m,
                                     const char *twist_json,
                                     const char *kernel_name,
                                     bool *out_holds);

/**
 * Closed-form duality decision for a WIT sheaf (`wit` is 0 or 1).
 *
 * # Safety
 * `out` must be valid.
 */
enum WfStatus wf_duality_decision(uint32_t n,
                                  uint32_t c,
                                  uint8_t wit,
                                  int32_t dim_shift,
                                  char **out);

/**
 * Spectral-sequence derivation for the same scenario: pages, relations and
 * the derived conclusion.
 *
 * # Safety
 * `out` must be valid.
 */
enum WfStatus wf_duality_engine(uint32_t n, uint32_t c, uint8_t wit, int32_t dim_shift, char **out);

/**
 * Checks one destabilizer candidate of `Φ(O_X(-nΘ))`. `candidate_json`
 * may be null only when `n = 1`.
 *
 * # Safety
 * Pointers must be valid; `candidate_json` may be null.
 */
enum WfStatus wf_certify(const struct WfModel *model,
                         uint32_t n,
                         const char *pol_json,
                         const char *candidate_json,
                         char **out);

/**
 * Exhaustive candidate search for `Φ(O_X(-nΘ))`. `bounds_json` may be null
 * for the defaults; `out` may be null when only the flag is wanted.
 *
 * # Safety
 * Pointers must be valid; optional ones may be null.
 */
enum WfStatus wf_enumerate(const struct WfModel *model,
                           uint32_t n,
                           const char *pol_json,
                           const char *bounds_json,
                           bool *out_any_violation,
                           char **out);

/**
 * Stability of the transform of `O_X(mΘ) ⊗ p*N`, `m ≠ 0`.
 *
 * # Safety
 * Pointers must be valid; `twist_json` and `bounds_json` may be null.
 */
enum WfStatus wf_transform_stability(const struct WfModel *model,
                                     int64_t m,
                                     const char *twist_json,
                                     const char *pol_json,
                                     const char *bounds_json,
                                     char **out);

/**
 * Product of two classes on the threefold.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_x_mul(const struct WfModel *model,
                       const char *u_json,
                       const char *v_json,
                       char **out);

/**
 * Degree of a class on the threefold, as `"p/q"`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum WfStatus wf_x_integrate(const struct WfModel *model, const char *u_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEIERFM_H */
