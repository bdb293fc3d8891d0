#ifndef PINCHLAB_H
#define PINCHLAB_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PlStatus {
  PlStatus_Ok = 0,
  PlStatus_NullPointer = 1,
  PlStatus_InvalidArgument = 2,
  PlStatus_Capacity = 3,
  PlStatus_Domain = 4,
  PlStatus_Panic = 5,
} PlStatus;

/**
 * Opaque `Gr^n[lo, hi]` poset with cached Betti numbers.
 */
typedef struct PlGrPoset PlGrPoset;

/**
 * Opaque trigonometric polynomial.
 */
typedef struct PlTrigPoly PlTrigPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *pl_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pl_version(void);

/**
 * Builds `Gr^n[lo, hi]`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum PlStatus pl_gr_range_new(uintptr_t n, uintptr_t lo, uintptr_t hi, struct PlGrPoset **out);

/**
 * # Safety
 * `h` must come from [`pl_gr_range_new`]; `out` must be writable.
 */
enum PlStatus pl_gr_poset_len(const struct PlGrPoset *h, uintptr_t *out);

/**
 * Number of elements in a longest chain.
 *
 * # Safety
 * `h` must come from [`pl_gr_range_new`]; `out` must be writable.
 */
enum PlStatus pl_gr_poset_max_chain(const struct PlGrPoset *h, uintptr_t *out);

/**
 * Z2 Betti numbers of the order complex. Writes up to `cap` entries into
 * `buf` and the full length into `len`; a short buffer gives `Capacity`.
 *
 * # Safety
 * `h` must come from [`pl_gr_range_new`]; `buf` must hold `cap` entries
 * (may be null when `cap` is 0); `len` must be writable.
 */
enum PlStatus pl_gr_poset_betti(struct PlGrPoset *h, uintptr_t *buf, uintptr_t cap, uintptr_t *len);

/**
 * # Safety
 * `h` must come from [`pl_gr_range_new`] and not be used afterwards. Null is ignored.
 */
void pl_gr_poset_free(struct PlGrPoset *h);

/**
 * From `[s0, s1, s1', s2, s2', ...]` (odd length).
 *
 * # Safety
 * `coeffs` must hold `len` doubles; `out` must be writable.
 */
enum PlStatus pl_trig_new(const double *coeffs, uintptr_t len, struct PlTrigPoly **out);

/**
 * # Safety
 * `h` must come from [`pl_trig_new`]; `out` must be writable.
 */
enum PlStatus pl_trig_eval(const struct PlTrigPoly *h, double alpha, double *out);

/**
 * Real roots of odd multiplicity and the genus `max(n_odd / 2 - 1, 0)`.
 *
 * # Safety
 * `h` must come from [`pl_trig_new`]; `n_odd_out` and `genus_out` must be writable.
 */
enum PlStatus pl_trig_genus(const struct PlTrigPoly *h,
                            double tol,
                            uintptr_t *n_odd_out,
                            uintptr_t *genus_out);

/**
 * # Safety
 * `h` must come from [`pl_trig_new`] and not be used afterwards. Null is ignored.
 */
void pl_trig_free(struct PlTrigPoly *h);

/**
 * Genus of the family member at `a` (6 entries) and `b` (`2g - 2` entries),
 * with the default region profile.
 *
 * # Safety
 * `a` must hold 6 doubles, `b` must hold `b_len` doubles (may be null when
 * `b_len` is 0), `out` must be writable.
 */
enum PlStatus pl_family_genus(const double *a,
                              const double *b,
                              uintptr_t b_len,
                              uintptr_t g,
                              double tol,
                              uintptr_t *out);

/**
 * Whether the twelve pinching strata give a non-bounding cycle in `Gr^2[1]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PlStatus pl_twelve_cycle_check(bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PINCHLAB_H */
