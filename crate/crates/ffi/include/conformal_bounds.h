#ifndef CONFORMAL_BOUNDS_H
#define CONFORMAL_BOUNDS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum CbCase {
  CB_CASE_NONUMBILIC = 0,
  CB_CASE_UMBILIC = 1,
} CbCase;

typedef enum CbStatus {
  CB_STATUS_OK = 0,
  CB_STATUS_NULL_POINTER = 1,
  CB_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Dimension outside the supported range, or a pole.
   */
  CB_STATUS_DOMAIN = 3,
  CB_STATUS_NOT_CONVERGED = 4,
  CB_STATUS_CHECK_FAILED = 5,
  CB_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  CB_STATUS_INTERNAL = 7,
} CbStatus;

typedef enum CbTag {
  CB_TAG_V = 0,
  CB_TAG_LAMBDA = 1,
  CB_TAG_U1 = 2,
  CB_TAG_U2 = 3,
  CB_TAG_V1 = 4,
  CB_TAG_V2 = 5,
  CB_TAG_W1 = 6,
  CB_TAG_W2 = 7,
} CbTag;

typedef enum CbTarget {
  CB_TARGET_C1_LOWER = 0,
  CB_TARGET_C1_UPPER = 1,
  CB_TARGET_C2_LOWER = 2,
} CbTarget;

/**
 * Opaque exact bound assembly.
 */
typedef struct CbAssembly CbAssembly;

/**
 * Opaque solved profile field.
 */
typedef struct CbField CbField;

/**
 * Result of a numeric constant computation, in units of
 * `omega_(n-2) * B((n-1)/2, (n+1)/2)`.
 */
typedef struct CbConstant {
  double value;
  double error;
  double lower_bound;
  /**
   * NaN when no upper bound exists.
   */
  double upper_bound;
  bool contained;
} CbConstant;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cb_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length excluding the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
uintptr_t cb_last_error(char *buf, uintptr_t len);

/**
 * Builds the exact assembly of `t`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum CbStatus cb_assembly_new(enum CbTarget t, struct CbAssembly **out);

/**
 * # Safety
 * `h` must be null or a handle from `cb_assembly_new` not yet freed.
 */
void cb_assembly_free(struct CbAssembly *h);

/**
 * Total of the assembly at dimension `n`, in Beta units.
 *
 * # Safety
 * `h` must be a live handle; `value` valid for a write.
 */
enum CbStatus cb_assembly_total(const struct CbAssembly *h, int64_t n, double *value);

/**
 * Whether the assembly total equals its closed form exactly.
 *
 * # Safety
 * `h` must be a live handle; `holds` valid for a write.
 */
enum CbStatus cb_assembly_identity_holds(const struct CbAssembly *h, bool *holds);

/**
 * Canonical text of the total as a rational function of `n`, written as in
 * [`cb_last_error`]. `needed` receives the full length excluding the NUL;
 * `BufferTooSmall` is returned when it does not fit.
 *
 * # Safety
 * `h` must be a live handle; `buf` valid for `len` bytes or null;
 * `needed` valid for a write or null.
 */
enum CbStatus cb_assembly_total_text(const struct CbAssembly *h,
                                     char *buf,
                                     uintptr_t len,
                                     uintptr_t *needed);

/**
 * Smallest dimension at which the exact total of `t` is positive.
 *
 * # Safety
 * `n` must be valid for a write.
 */
enum CbStatus cb_first_positive(enum CbTarget t, int64_t *n);

/**
 * Runs every exact identity check (both cases when `all_cases` is true).
 * Returns `CheckFailed` when any check fails.
 *
 * # Safety
 * `passed` and `total` must be valid for writes.
 */
enum CbStatus cb_verify_identities(enum CbCase c,
                                   bool all_cases,
                                   uintptr_t *passed,
                                   uintptr_t *total);

/**
 * Solves the tagged profile at dimension `n` on a square grid of `nodes`
 * per direction with the default radius and stretching.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum CbStatus cb_field_solve(enum CbTag t, int64_t n, uintptr_t nodes, struct CbField **out);

/**
 * # Safety
 * `h` must be null or a handle from `cb_field_solve` not yet freed.
 */
void cb_field_free(struct CbField *h);

/**
 * # Safety
 * `h` must be a live handle; `n_r`, `n_s` valid for writes.
 */
enum CbStatus cb_field_dims(const struct CbField *h, uintptr_t *n_r, uintptr_t *n_s);

/**
 * Node coordinates and value at `(i, j)`.
 *
 * # Safety
 * `h` must be a live handle; `r`, `s`, `value` valid for writes.
 */
enum CbStatus cb_field_node(const struct CbField *h,
                            uintptr_t i,
                            uintptr_t j,
                            double *r,
                            double *s,
                            double *value);

/**
 * Bilinear interpolation of the field at `(r, s)` inside the box.
 *
 * # Safety
 * `h` must be a live handle; `value` valid for a write.
 */
enum CbStatus cb_field_interpolate(const struct CbField *h, double r, double s, double *value);

/**
 * Checks the sub/supersolution bounds of the field at `tolerance`.
 * `pass` receives the verdict; the status is `Ok` either way.
 *
 * # Safety
 * `h` must be a live handle; `pass` valid for a write.
 */
enum CbStatus cb_field_sandwich(const struct CbField *h, double tolerance, bool *pass);

/**
 * Numeric value of the constant of case `c` at dimension `n` with the
 * default grid.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum CbStatus cb_compute_constant(enum CbCase c, int64_t n, struct CbConstant *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CONFORMAL_BOUNDS_H */
