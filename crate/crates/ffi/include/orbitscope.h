#ifndef ORBITSCOPE_H
#define ORBITSCOPE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. `OS_STATUS_OK` is zero; everything else is an error.
 */
typedef enum OsStatus {
  OS_STATUS_OK = 0,
  OS_STATUS_NULL_ARGUMENT = 1,
  OS_STATUS_INVALID_SPEC = 2,
  OS_STATUS_SPEC_MISMATCH = 3,
  OS_STATUS_PARAM_OUT_OF_DOMAIN = 4,
  OS_STATUS_INCIDENCE_DIVISOR = 5,
  OS_STATUS_UNCLASSIFIABLE = 6,
  OS_STATUS_DOMAIN_NOT_IN_FAMILY = 7,
  OS_STATUS_NOT_HYPERSURFACE = 8,
  OS_STATUS_DEGENERATE_GRADIENT = 9,
  OS_STATUS_OUT_OF_DOMAIN = 10,
  OS_STATUS_BUFFER_TOO_SMALL = 11,
  OS_STATUS_NUMERICAL = 12,
  OS_STATUS_OTHER = 13,
  OS_STATUS_PANIC = 14,
} OsStatus;

typedef enum OsFamily {
  OS_FAMILY_SO0 = 0,
  OS_FAMILY_SU = 1,
} OsFamily;

typedef enum OsOrbitKind {
  OS_ORBIT_KIND_SINGULAR_Z1 = 0,
  OS_ORBIT_KIND_SINGULAR_Z2 = 1,
  OS_ORBIT_KIND_SINGULAR_Z3 = 2,
  OS_ORBIT_KIND_PRINCIPAL = 3,
  OS_ORBIT_KIND_NON_CLOSED = 4,
} OsOrbitKind;

typedef enum OsLeviCharacter {
  OS_LEVI_CHARACTER_DEFINITE = 0,
  OS_LEVI_CHARACTER_SEMIDEFINITE = 1,
  OS_LEVI_CHARACTER_INDEFINITE = 2,
  OS_LEVI_CHARACTER_IDENTICALLY_ZERO = 3,
} OsLeviCharacter;

/**
 * Domains of the table; `param` is `a` for `D*`, `b` for `S*`, ignored otherwise.
 */
typedef enum OsDomain {
  OS_DOMAIN_D1 = 0,
  OS_DOMAIN_D2 = 1,
  OS_DOMAIN_S1 = 2,
  OS_DOMAIN_S2 = 3,
  OS_DOMAIN_W11 = 4,
  OS_DOMAIN_W12 = 5,
  OS_DOMAIN_W21 = 6,
  OS_DOMAIN_W22 = 7,
} OsDomain;

/**
 * Opaque model point.
 */
typedef struct OsPoint OsPoint;

/**
 * Opaque group spec.
 */
typedef struct OsSpec OsSpec;

typedef struct OsClassification {
  enum OsOrbitKind kind;
  /**
   * Slice index for principal orbits, `w` index for non-closed ones, else 0.
   */
  uint8_t index;
  /**
   * Slice parameter for principal orbits, else NaN.
   */
  double param;
  double f;
  uintptr_t tangent_rank;
} OsClassification;

typedef struct OsLeviSignature {
  uintptr_t pos;
  uintptr_t neg;
  uintptr_t zero;
  enum OsLeviCharacter character;
} OsLeviSignature;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Owned by the library.
 */
const char *os_last_error(void);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum OsStatus os_spec_new(enum OsFamily family, uintptr_t n, struct OsSpec **out);

/**
 * # Safety
 * `spec` must come from [`os_spec_new`] and not be freed twice. NULL is ignored.
 */
void os_spec_free(struct OsSpec *spec);

/**
 * Real dimension of `G^C / K^C`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum OsStatus os_spec_real_dim(const struct OsSpec *spec, uintptr_t *out);

/**
 * Point on the hyperquadric (SO0 family) from `n + 1` complex coordinates.
 *
 * # Safety
 * `re` and `im` must point to `len` doubles each.
 */
enum OsStatus os_point_new_quadric(const struct OsSpec *spec,
                                   const double *re,
                                   const double *im,
                                   uintptr_t len,
                                   struct OsPoint **out);

/**
 * Point of the pair model (SU family); each factor has `len = n + 1` coordinates.
 *
 * # Safety
 * Each coordinate array must hold `len` doubles.
 */
enum OsStatus os_point_new_pair(const struct OsSpec *spec,
                                const double *z_re,
                                const double *z_im,
                                const double *w_re,
                                const double *w_im,
                                uintptr_t len,
                                struct OsPoint **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum OsStatus os_slice_point(const struct OsSpec *spec,
                             uint8_t slice,
                             double param,
                             struct OsPoint **out);

/**
 * # Safety
 * `point` must come from this library and not be freed twice. NULL is ignored.
 */
void os_point_free(struct OsPoint *point);

/**
 * Copies the coordinates (`xi`, or `z` followed by `w`) into caller buffers.
 *
 * `len_out` always receives the required length; `BufferTooSmall` is
 * returned when `cap` is smaller.
 *
 * # Safety
 * `re` and `im` must hold `cap` doubles; `len_out` must be valid.
 */
enum OsStatus os_point_coords(const struct OsPoint *point,
                              double *re,
                              double *im,
                              uintptr_t cap,
                              uintptr_t *len_out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum OsStatus os_invariant_f(const struct OsPoint *point, double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum OsStatus os_classify(const struct OsSpec *spec,
                          const struct OsPoint *point,
                          struct OsClassification *out);

/**
 * Numeric Levi signature of the orbit through `point`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum OsStatus os_levi_signature(const struct OsSpec *spec,
                                const struct OsPoint *point,
                                double zero_threshold,
                                struct OsLeviSignature *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum OsStatus os_domain_contains(const struct OsSpec *spec,
                                 enum OsDomain domain,
                                 double param,
                                 const struct OsPoint *point,
                                 bool *out);

/**
 * Runs the Stein-table checks and returns the JSON report; `all_pass` may be NULL.
 *
 * # Safety
 * Pointers must be valid; release the string with [`os_string_free`].
 */
enum OsStatus os_verify_table_json(const struct OsSpec *spec,
                                   uintptr_t samples,
                                   uint64_t seed,
                                   char **json_out,
                                   bool *all_pass);

/**
 * # Safety
 * `s` must come from this library. NULL is ignored.
 */
void os_string_free(char *s);

/**
 * Library version as a static NUL-terminated string.
 */
const char *os_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBITSCOPE_H */
