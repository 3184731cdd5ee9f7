#ifndef BIFRAME_H
#define BIFRAME_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum BfStatus {
  BF_STATUS_OK = 0,
  BF_STATUS_INVALID_ARGUMENT = 1,
  BF_STATUS_SHAPE = 2,
  BF_STATUS_SINGULAR = 3,
  BF_STATUS_NOT_HERMITIAN = 4,
  BF_STATUS_FORMAT = 5,
  BF_STATUS_VALIDATION = 6,
  BF_STATUS_IO = 7,
  BF_STATUS_NULL_POINTER = 8,
  BF_STATUS_PANIC = 9,
} BfStatus;

typedef enum BfSide {
  BF_SIDE_LEFT = 0,
  BF_SIDE_RIGHT = 1,
} BfSide;

/**
 * Opaque handle to a biframe pair.
 */
typedef struct BfPair BfPair;

/**
 * Optimal bounds and diagnostics of a pair.
 */
typedef struct BfBounds {
  double lower;
  double upper;
  double hermitian_residual;
  double imaginary_form_max;
  bool is_bessel;
  bool is_biframe;
} BfBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a pair from a JSON document (NUL-terminated UTF-8).
 *
 * # Safety
 * `json` must be a valid C string and `out` a writable pointer.
 */
enum BfStatus bf_pair_from_json(const char *json, struct BfPair **out);

/**
 * Loads a pair from a JSON document on disk.
 *
 * # Safety
 * `path` must be a valid C string and `out` a writable pointer.
 */
enum BfStatus bf_pair_load(const char *path, struct BfPair **out);

/**
 * Builds a real pair. `f` and `g` hold `atoms` vectors of length `dim`, one
 * after another.
 *
 * # Safety
 * `weights` must hold `atoms` doubles, `f` and `g` `atoms * dim` doubles each.
 */
enum BfStatus bf_pair_new_real(size_t dim,
                               size_t atoms,
                               const double *weights,
                               const double *f,
                               const double *g,
                               struct BfPair **out);

/**
 * Builds a complex pair from interleaved `(re, im)` data.
 *
 * # Safety
 * `weights` must hold `atoms` doubles, `f` and `g` `2 * atoms * dim` doubles each.
 */
enum BfStatus bf_pair_new_complex(size_t dim,
                                  size_t atoms,
                                  const double *weights,
                                  const double *f,
                                  const double *g,
                                  struct BfPair **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `pair` must come from this library and not be freed twice.
 */
void bf_pair_free(struct BfPair *pair);

/**
 * Dimension of the underlying space, or 0 for a null handle.
 *
 * # Safety
 * `pair` must be null or a live handle.
 */
size_t bf_pair_dim(const struct BfPair *pair);

/**
 * Number of atoms, or 0 for a null handle.
 *
 * # Safety
 * `pair` must be null or a live handle.
 */
size_t bf_pair_atom_count(const struct BfPair *pair);

/**
 * Optimal biframe bounds with relative tolerance `tol`.
 *
 * # Safety
 * `pair` must be a live handle and `out` writable.
 */
enum BfStatus bf_pair_bounds(const struct BfPair *pair, double tol, struct BfBounds *out);

/**
 * Writes the mixed operator as a row-major interleaved matrix; `len` must be
 * at least `2 * dim * dim`.
 *
 * # Safety
 * `out` must be writable for `len` doubles.
 */
enum BfStatus bf_pair_operator(const struct BfPair *pair, double *out, size_t len);

/**
 * Operator norm of `S - I`; zero exactly for a dual pair.
 *
 * # Safety
 * `pair` must be a live handle and `out` writable.
 */
enum BfStatus bf_pair_duality_residual(const struct BfPair *pair, double *out);

/**
 * Canonical dual pair on the given side.
 *
 * # Safety
 * `pair` must be a live handle and `out` writable.
 */
enum BfStatus bf_pair_canonical_dual(const struct BfPair *pair,
                                     enum BfSide side,
                                     double tol,
                                     struct BfPair **out);

/**
 * Largest reconstruction residuals over the standard basis, for the left
 * and right formulas.
 *
 * # Safety
 * `pair` must be a live handle; `left` and `right` writable.
 */
enum BfStatus bf_pair_reconstruction_residual(const struct BfPair *pair,
                                              double tol,
                                              double *left,
                                              double *right);

/**
 * Tensor product pair over the product measure.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum BfStatus bf_tensor_pair(const struct BfPair *a, const struct BfPair *b, struct BfPair **out);

/**
 * Norm of the multiplier with symbol `symbol` (interleaved, one value per
 * atom; null means the unit symbol) and its a-priori bound.
 *
 * # Safety
 * `symbol` must be null or hold `2 * atoms` doubles; `norm` and `bound` writable.
 */
enum BfStatus bf_multiplier_norm(const struct BfPair *pair,
                                 const double *symbol,
                                 double *norm,
                                 double *bound);

/**
 * Serializes a pair to a JSON document. Free the string with [`bf_string_free`].
 *
 * # Safety
 * `pair` must be a live handle and `out` writable.
 */
enum BfStatus bf_pair_to_json(const struct BfPair *pair, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void bf_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into the library from the same thread.
 */
const char *bf_last_error_message(void);

/**
 * Library version as a static C string.
 */
const char *bf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIFRAME_H */
