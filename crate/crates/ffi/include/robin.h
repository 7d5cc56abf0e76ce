#ifndef ROBIN_H
#define ROBIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum RobinStatus {
  ROBIN_STATUS_OK = 0,
  ROBIN_STATUS_NULL_POINTER = 1,
  /**
   * A string argument is not valid UTF-8 or an option is out of range.
   */
  ROBIN_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Unreadable input or a malformed domain description.
   */
  ROBIN_STATUS_PARSE = 3,
  /**
   * The domain violates a hypothesis (for example a convex corner).
   */
  ROBIN_STATUS_ASSUMPTION_VIOLATION = 4,
  /**
   * A model operator was called outside its certified range.
   */
  ROBIN_STATUS_PRECONDITION = 5,
  /**
   * `beta` or the strip half-width is outside the bracket's validity range.
   */
  ROBIN_STATUS_VALIDITY = 6,
  /**
   * Convergence, range or internal consistency failure.
   */
  ROBIN_STATUS_NUMERICAL = 7,
  ROBIN_STATUS_PANIC = 8,
} RobinStatus;

/**
 * Opaque domain handle; free with [`robin_domain_free`].
 */
typedef struct RobinDomain RobinDomain;

/**
 * Bracket configuration. Zero fields select the defaults.
 */
typedef struct RobinBracketOptions {
  /**
   * Strip half-width; `<= 0` for 0.99 of the admissible limit.
   */
  double a;
  /**
   * Intervals per arc; 0 for the β schedule.
   */
  uint32_t m;
  /**
   * Nonzero for the closed-form (asymptotic) interval bounds.
   */
  int32_t paper_mode;
  /**
   * Nonzero for `M ~ β^{1/4}`.
   */
  int32_t critical_m;
  /**
   * Nonzero to bound end-face terms by the curvature seminorm.
   */
  int32_t uniform_end_bound;
} RobinBracketOptions;

/**
 * Enclosure of the principal eigenvalue.
 */
typedef struct RobinBracket {
  double beta;
  double lower;
  double upper;
  double a;
  double gamma_max;
  /**
   * Largest interval count over the arcs.
   */
  uint32_t m;
  /**
   * Nonzero when the domain is unbounded.
   */
  int32_t exterior;
} RobinBracket;

/**
 * Ground state of a one-dimensional model operator.
 */
typedef struct RobinGroundState {
  double eigenvalue;
  /**
   * Analytic enclosure `[lo, hi]`.
   */
  double enclosure_lo;
  double enclosure_hi;
  /**
   * `ln |E + beta^2|`; finite even when the gap underflows.
   */
  double ln_gap;
  /**
   * Nonzero when the eigenvalue lies strictly inside the enclosure.
   */
  int32_t strictly_inside;
} RobinGroundState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next call into this library on the thread.
 */
const char *robin_last_error_message(void);

/**
 * Parse a TOML domain description.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
enum RobinStatus robin_domain_from_toml(const char *source, struct RobinDomain **out);

/**
 * Load a TOML domain description from a file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum RobinStatus robin_domain_load(const char *path, struct RobinDomain **out);

/**
 * Disk of the given radius centred at the origin.
 *
 * # Safety
 * `out` must be writable.
 */
enum RobinStatus robin_domain_disk(double radius, struct RobinDomain **out);

/**
 * Release a domain. Null is ignored.
 *
 * # Safety
 * `domain` must come from this library and not be used afterwards.
 */
void robin_domain_free(struct RobinDomain *domain);

/**
 * Check the geometric hypotheses. Returns `Ok` when all pass; the failing
 * check is named in the last error message otherwise.
 *
 * # Safety
 * `domain` must be a live handle.
 */
enum RobinStatus robin_domain_validate(const struct RobinDomain *domain);

/**
 * Maximal signed boundary curvature.
 *
 * # Safety
 * `domain` must be a live handle; `out` must be writable.
 */
enum RobinStatus robin_domain_gamma_max(const struct RobinDomain *domain, double *out);

/**
 * Options equivalent to passing null.
 */
struct RobinBracketOptions robin_bracket_options_default(void);

/**
 * Two-sided enclosure of the principal eigenvalue at `beta`.
 *
 * # Safety
 * `domain` must be a live handle, `options` null or readable, `out` writable.
 */
enum RobinStatus robin_bracket(const struct RobinDomain *domain,
                               double beta,
                               const struct RobinBracketOptions *options,
                               struct RobinBracket *out);

/**
 * Full enclosure with per-interval certificates as a JSON document.
 * Release the string with [`robin_string_free`].
 *
 * # Safety
 * As for [`robin_bracket`]; `out` receives an owned string.
 */
enum RobinStatus robin_bracket_json(const struct RobinDomain *domain,
                                    double beta,
                                    const struct RobinBracketOptions *options,
                                    char **out);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void robin_string_free(char *s);

/**
 * Exact principal eigenvalue of the disk of radius `radius`.
 *
 * # Safety
 * `out` must be writable.
 */
enum RobinStatus robin_disk_exact(double radius, double beta, double *out);

/**
 * Ground state on `(0, a)` with Robin conditions of strength `beta` at 0
 * and slope `gamma` at `a`.
 *
 * # Safety
 * `out` must be writable.
 */
enum RobinStatus robin_robin_ground(double a,
                                    double beta,
                                    double gamma,
                                    struct RobinGroundState *out);

/**
 * Ground state on `(0, a)` with a Robin condition at 0 and Dirichlet at `a`.
 *
 * # Safety
 * `out` must be writable.
 */
enum RobinStatus robin_dirichlet_ground(double a, double beta, struct RobinGroundState *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROBIN_H */
