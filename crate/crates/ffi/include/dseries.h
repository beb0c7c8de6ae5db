#ifndef DSERIES_H
#define DSERIES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DsStatus {
  DS_STATUS_OK = 0,
  DS_STATUS_INPUT_ERROR = 2,
  DS_STATUS_RESOURCE_ERROR = 3,
  DS_STATUS_INTERNAL_ERROR = 4,
  DS_STATUS_NULL_POINTER = 5,
  DS_STATUS_PANIC = 6,
} DsStatus;

/**
 * Counts of cubic fields by discriminant.
 */
typedef struct DsCubicTable DsCubicTable;

/**
 * Flattened series: `(n, a_n)` pairs with nonzero `a_n`, sorted by `n`.
 */
typedef struct DsSeries DsSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Computes the series for degree `ell` and resolvent discriminant `d` up to `x`.
 *
 * `fields` is null or a NUL-terminated field list (`ell D k c0 ... c_{ell-1}` per line).
 * On success `*out` owns a series to be released with [`ds_series_free`].
 *
 * # Safety
 * `fields` must be null or a valid C string; `out` must be valid for writes.
 */
enum DsStatus ds_phi(uint64_t ell,
                     int64_t d,
                     uint64_t x,
                     const char *fields,
                     struct DsSeries **out);

/**
 * Number of nonzero terms.
 *
 * # Safety
 * `s` must come from [`ds_phi`]; `len` must be valid for writes.
 */
enum DsStatus ds_series_len(const struct DsSeries *s, size_t *len);

/**
 * The `i`-th nonzero term `(n, a_n)` in increasing `n`.
 *
 * # Safety
 * `s` must come from [`ds_phi`]; `n` and `c` must be valid for writes.
 */
enum DsStatus ds_series_term(const struct DsSeries *s, size_t i, uint64_t *n, int64_t *c);

/**
 * # Safety
 * `s` must be null or come from [`ds_phi`], and not be freed twice.
 */
void ds_series_free(struct DsSeries *s);

/**
 * Kronecker symbol `(d/n)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum DsStatus ds_kronecker(int64_t d, int64_t n, int32_t *out);

/**
 * Enumerates cubic fields with `|Disc| <= x`.
 *
 * # Safety
 * `out` must be valid for writes; release the table with [`ds_cubic_table_free`].
 */
enum DsStatus ds_cubic_table_build(uint64_t x, struct DsCubicTable **out);

/**
 * Number of cubic fields of discriminant exactly `d`.
 *
 * # Safety
 * `t` must come from [`ds_cubic_table_build`]; `out` must be valid for writes.
 */
enum DsStatus ds_cubic_table_n3(const struct DsCubicTable *t, int64_t d, uint64_t *out);

/**
 * # Safety
 * `t` must be null or come from [`ds_cubic_table_build`], and not be freed twice.
 */
void ds_cubic_table_free(struct DsCubicTable *t);

/**
 * Leading constant of the partial counts, to `digits` significant digits.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum DsStatus ds_residue_constant(uint64_t ell, int64_t d, uint32_t digits, double *out);

/**
 * Whether the fundamental unit of `Q(sqrt ell)` has `ell`-free second coordinate.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum DsStatus ds_aac_holds(uint64_t ell, bool *out);

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *ds_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DSERIES_H */
