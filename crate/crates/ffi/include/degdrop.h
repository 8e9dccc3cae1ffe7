#ifndef DEGDROP_H
#define DEGDROP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Degree value used for the zero function.
 */
#define DEGDROP_DEGREE_NEG_INF -1

/**
 * Counting query selector.
 */
typedef enum DegdropCountMode {
  DegdropCountMode_DropHyperplanes = 0,
  DegdropCountMode_FastPoints = 1,
} DegdropCountMode;

/**
 * Result code of every fallible call.
 */
typedef enum DegdropStatus {
  DegdropStatus_Ok = 0,
  DegdropStatus_InvalidParameter = 1,
  DegdropStatus_CapExceeded = 2,
  DegdropStatus_Consistency = 3,
  DegdropStatus_Parse = 4,
  DegdropStatus_NullPointer = 5,
  DegdropStatus_Panic = 6,
} DegdropStatus;

/**
 * Finite field GF(2^n) with a fixed modulus.
 */
typedef struct DegdropField DegdropField;

/**
 * Function F_2^n -> F_2^m stored as a truth table.
 */
typedef struct DegdropFunction DegdropFunction;

/**
 * Result of an exhaustive subspace scan.
 */
typedef struct DegdropScanReport DegdropScanReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *degdrop_last_error_message(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void degdrop_string_free(char *s);

/**
 * Creates GF(2^n). `modulus` 0 selects the default irreducible polynomial.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DegdropStatus degdrop_field_new(uint32_t n, uint64_t modulus, struct DegdropField **out);

/**
 * # Safety
 * `field` must come from [`degdrop_field_new`] or be NULL.
 */
void degdrop_field_free(struct DegdropField *field);

/**
 * # Safety
 * `field` must be a live handle.
 */
enum DegdropStatus degdrop_field_modulus(const struct DegdropField *field, uint64_t *out);

/**
 * x -> x^d on the field.
 *
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum DegdropStatus degdrop_function_power(const struct DegdropField *field,
                                          uint64_t d,
                                          struct DegdropFunction **out);

/**
 * x -> x^(2^n - 2), with 0 -> 0.
 *
 * # Safety
 * `field` must be a live handle and `out` valid.
 */
enum DegdropStatus degdrop_function_inverse(const struct DegdropField *field,
                                            struct DegdropFunction **out);

/**
 * Builds a function from `len == 2^n` outputs, each below `2^m`.
 *
 * # Safety
 * `values` must point to `len` readable integers and `out` must be valid.
 */
enum DegdropStatus degdrop_function_from_table(uint32_t n,
                                               uint32_t m,
                                               const uint32_t *values,
                                               uintptr_t len,
                                               struct DegdropFunction **out);

/**
 * # Safety
 * `f` must come from this library or be NULL.
 */
void degdrop_function_free(struct DegdropFunction *f);

/**
 * Algebraic degree; [`DEGDROP_DEGREE_NEG_INF`] for the zero function.
 *
 * # Safety
 * `f` must be a live handle and `out` valid.
 */
enum DegdropStatus degdrop_function_degree(const struct DegdropFunction *f, int32_t *out);

/**
 * Whether the function is APN.
 *
 * # Safety
 * `f` must be a live handle and `out` valid.
 */
enum DegdropStatus degdrop_function_is_apn(const struct DegdropFunction *f, bool *out);

/**
 * Scans every subspace of codimension `k` (affine ones when `affine`).
 * `workers` 0 uses all cores.
 *
 * # Safety
 * `f` must be a live handle and `out` valid.
 */
enum DegdropStatus degdrop_scan(const struct DegdropFunction *f,
                                uint32_t k,
                                bool affine,
                                uint32_t workers,
                                struct DegdropScanReport **out);

/**
 * # Safety
 * `r` must come from [`degdrop_scan`] or be NULL.
 */
void degdrop_scan_report_free(struct DegdropScanReport *r);

/**
 * # Safety
 * `r` must be a live handle and the out-pointers valid.
 */
enum DegdropStatus degdrop_scan_report_summary(const struct DegdropScanReport *r,
                                               uint64_t *total,
                                               uint64_t *drop_count,
                                               int32_t *min_degree);

/**
 * Number of histogram bins, ordered by decreasing degree.
 *
 * # Safety
 * `r` must be a live handle and `out` valid.
 */
enum DegdropStatus degdrop_scan_report_bins(const struct DegdropScanReport *r, uintptr_t *out);

/**
 * # Safety
 * `r` must be a live handle and the out-pointers valid.
 */
enum DegdropStatus degdrop_scan_report_bin(const struct DegdropScanReport *r,
                                           uintptr_t index,
                                           int32_t *degree,
                                           uint64_t *count);

/**
 * Full report as JSON. Release with [`degdrop_string_free`].
 *
 * # Safety
 * `r` must be a live handle and `out` valid.
 */
enum DegdropStatus degdrop_scan_report_json(const struct DegdropScanReport *r, char **out);

/**
 * Counts homogeneous degree-`r` functions F_2^n -> F_2^m. A negative `j`
 * counts those with no nonzero drop direction (or fast point); otherwise
 * those whose direction space has dimension exactly `j`. The count is
 * written as a decimal string; release it with [`degdrop_string_free`].
 *
 * # Safety
 * `out` must be valid.
 */
enum DegdropStatus degdrop_count(enum DegdropCountMode mode,
                                 uint32_t n,
                                 uint32_t m,
                                 uint32_t r,
                                 int32_t j,
                                 char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEGDROP_H */
