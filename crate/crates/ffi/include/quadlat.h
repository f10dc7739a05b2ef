#ifndef QUADLAT_H
#define QUADLAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum QlStatus {
  QL_STATUS_OK = 0,
  QL_STATUS_NULL_POINTER = 1,
  QL_STATUS_INVALID_ARGUMENT = 2,
  QL_STATUS_INVALID_RING = 3,
  QL_STATUS_DIMENSION = 4,
  QL_STATUS_DEPENDENT_BASIS = 5,
  QL_STATUS_OVERFLOW = 6,
  QL_STATUS_NOT_CONVERGED = 7,
  QL_STATUS_BUFFER_TOO_SMALL = 8,
  QL_STATUS_RANK_DEFICIENT = 9,
  QL_STATUS_PANIC = 99,
} QlStatus;

typedef struct QlBasis QlBasis;

typedef struct QlReduction QlReduction;

typedef struct QlRing QlRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ql_version(void);

/**
 * Copies the last error of this thread into `buf` (always NUL-terminated when
 * `len > 0`) and returns the full message length, or 0 when there is none.
 */
size_t ql_last_error_message(char *buf, size_t len);

/**
 * `Z[ξ]` for square-free `d > 0`.
 */
enum QlStatus ql_ring_new(int64_t d, struct QlRing **out);

void ql_ring_free(struct QlRing *ring);

/**
 * `d` of the ring, or 0 for a null handle.
 */
int64_t ql_ring_d(const struct QlRing *ring);

/**
 * Covering radius, or NaN for a null handle.
 */
double ql_ring_covering_radius(const struct QlRing *ring);

bool ql_ring_is_euclidean(const struct QlRing *ring);

/**
 * Nearest ring element `a + bξ` to `re + i·im`.
 */
enum QlStatus ql_quantize(const struct QlRing *ring,
                          double re,
                          double im,
                          int64_t *out_a,
                          int64_t *out_b);

/**
 * Basis from `n·n` column-major real and imaginary parts.
 */
enum QlStatus ql_basis_new(const struct QlRing *ring,
                           size_t n,
                           const double *re,
                           const double *im,
                           struct QlBasis **out);

void ql_basis_free(struct QlBasis *basis);

/**
 * Dimension `n`, or 0 for a null handle.
 */
size_t ql_basis_dim(const struct QlBasis *basis);

enum QlStatus ql_alll_reduce(const struct QlBasis *basis, double delta, struct QlReduction **out);

/**
 * Gauss reduction; the basis must be 2×2.
 */
enum QlStatus ql_gauss_reduce(const struct QlBasis *basis, struct QlReduction **out);

void ql_reduction_free(struct QlReduction *red);

size_t ql_reduction_dim(const struct QlReduction *red);

size_t ql_reduction_swaps(const struct QlReduction *red);

/**
 * Whether every recorded quality bound holds. False for a null handle.
 */
bool ql_reduction_bounds_hold(const struct QlReduction *red);

bool ql_reduction_non_euclidean(const struct QlReduction *red);

/**
 * Squared column norms of the reduced basis into `out[0..n]`.
 */
enum QlStatus ql_reduction_squared_norms(const struct QlReduction *red, double *out, size_t len);

/**
 * Reduced basis, column-major, into `re[0..n·n]` and `im[0..n·n]`.
 */
enum QlStatus ql_reduction_basis(const struct QlReduction *red, double *re, double *im, size_t len);

/**
 * Unimodular transform `U`, column-major, as `a[k] + b[k]·ξ`.
 */
enum QlStatus ql_reduction_transform(const struct QlReduction *red,
                                     int64_t *a,
                                     int64_t *b,
                                     size_t len);

/**
 * Shortest nonzero vector: coefficients into `a[0..n]`, `b[0..n]` and its norm.
 */
enum QlStatus ql_svp(const struct QlBasis *basis, int64_t *a, int64_t *b, size_t len, double *norm);

/**
 * Computation rate (bits) of coefficient vector `a + bξ` over channel `h` at `snr_db`.
 */
enum QlStatus ql_computation_rate(const struct QlRing *ring,
                                  size_t n,
                                  const double *h_re,
                                  const double *h_im,
                                  double snr_db,
                                  const int64_t *a,
                                  const int64_t *b,
                                  double *out_rate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUADLAT_H */
