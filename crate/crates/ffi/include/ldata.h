#ifndef LDATA_H
#define LDATA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LdCategory {
  LD_CATEGORY_TRIVIAL = 0,
  LD_CATEGORY_IMPOSSIBLE_BELOW_ONE = 1,
  LD_CATEGORY_DIRICHLET = 2,
  LD_CATEGORY_IMPOSSIBLE_BELOW_TWO = 3,
  LD_CATEGORY_UNKNOWN = 4,
} LdCategory;

typedef enum LdStatus {
  LD_STATUS_OK = 0,
  LD_STATUS_NULL_POINTER = 1,
  LD_STATUS_INVALID_UTF8 = 2,
  LD_STATUS_PANIC = 3,
  LD_STATUS_INVALID_ARGUMENT = 10,
  LD_STATUS_DOMAIN = 11,
  LD_STATUS_GAMMA_POLE = 12,
  LD_STATUS_GEOMETRY = 13,
  LD_STATUS_STRIP_EXCEEDED = 14,
  LD_STATUS_NON_CONVERGENCE = 15,
  LD_STATUS_NORMALIZATION = 16,
  LD_STATUS_NON_PRIMITIVE = 17,
  LD_STATUS_CHARACTER_INDEX = 18,
  LD_STATUS_PARSE = 19,
  LD_STATUS_COVERAGE = 20,
  LD_STATUS_LOWER_HALF_PLANE = 21,
  LD_STATUS_TWIST_SPEC = 22,
  LD_STATUS_RESONANCE = 23,
  LD_STATUS_ILL_CONDITIONED = 24,
  LD_STATUS_DEGREE_RANGE = 25,
  LD_STATUS_SPEC = 26,
  LD_STATUS_IO = 27,
} LdStatus;

/**
 * Opaque L-datum handle.
 */
typedef struct LdDatum LdDatum;

typedef struct LdEfReport {
  double zero_side;
  double zero_side_imag;
  double arithmetic_side;
  double residual;
  double zero_truncation_estimate;
  double prime_truncation_estimate;
  double quadrature_estimate;
  double composite_estimate;
  double t_max;
  uint64_t zero_entries;
  uint64_t prime_terms;
  bool pass;
} LdEfReport;

typedef struct LdComplex {
  double re;
  double im;
} LdComplex;

typedef struct LdTwistValue {
  struct LdComplex value;
  uint64_t terms;
  double tail_bound;
} LdTwistValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *ld_last_error(void);

const char *ld_version(void);

/**
 * ζ with its pole entries only.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum LdStatus ld_datum_zeta(struct LdDatum **out);

/**
 * ζ with the bundled zero table; `limit < 0` keeps every zero.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum LdStatus ld_datum_zeta_with_zeros(int64_t limit, struct LdDatum **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum LdStatus ld_datum_dirichlet(uint64_t modulus, uint64_t index, struct LdDatum **out);

/**
 * Builds a datum from a spec document; relative file names resolve against
 * the working directory.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum LdStatus ld_datum_from_spec_json(const char *json, struct LdDatum **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string and `out` valid for writes.
 */
enum LdStatus ld_datum_from_spec_file(const char *path, struct LdDatum **out);

/**
 * Σ weights[i]·data[i]. The inputs stay owned by the caller.
 *
 * # Safety
 * `weights` and `data` must point to `len` elements; each handle must be live.
 */
enum LdStatus ld_datum_combine(const double *weights,
                               const struct LdDatum *const *data,
                               size_t len,
                               struct LdDatum **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `d` must come from this library and not be used afterwards.
 */
void ld_datum_free(struct LdDatum *d);

/**
 * # Safety
 * `d` must be live and `out` valid for writes.
 */
enum LdStatus ld_datum_degree(const struct LdDatum *d, double *out);

/**
 * # Safety
 * `d` must be live and `out` valid for writes.
 */
enum LdStatus ld_datum_conductor(const struct LdDatum *d, double *out);

/**
 * Explicit-formula check with the bump on [center − width, center + width]
 * inside [0, support].
 *
 * # Safety
 * `d` must be live and `out` valid for writes.
 */
enum LdStatus ld_verify(const struct LdDatum *d,
                        double support,
                        double center,
                        double width,
                        double tolerance,
                        struct LdEfReport *out);

/**
 * Writes a(1), …, a(n_max) of L_F to `out`.
 *
 * # Safety
 * `d` must be live and `out` valid for `n_max` writes.
 */
enum LdStatus ld_exp_transform(const struct LdDatum *d, uint64_t n_max, struct LdComplex *out);

/**
 * # Safety
 * `d` must be live and `out` valid for writes.
 */
enum LdStatus ld_s_sum(const struct LdDatum *d,
                       struct LdComplex z,
                       uint64_t n_cap,
                       struct LdTwistValue *out);

/**
 * # Safety
 * `alphas` and `cs` must point to `len` elements; `d` must be live and
 * `out` valid for writes.
 */
enum LdStatus ld_twist_sum(const struct LdDatum *d,
                           struct LdComplex z,
                           const double *alphas,
                           const double *cs,
                           size_t len,
                           uint64_t n_cap,
                           struct LdTwistValue *out);

/**
 * Principal branch of log Γ(s).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum LdStatus ld_log_gamma(struct LdComplex s, struct LdComplex *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum LdStatus ld_digamma(struct LdComplex s, struct LdComplex *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum LdStatus ld_degree_gate(double degree, enum LdCategory *out);

bool ld_vanishing_order_gate(uint64_t n, uint64_t k);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LDATA_H */
