#ifndef SPECTRAL_FFI_H
#define SPECTRAL_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpMethod {
  SP_METHOD_LS_NNM = 0,
  SP_METHOD_POWER = 1,
} SpMethod;

typedef enum SpRegime {
  SP_REGIME_STRICT_SUBCRITICAL = 0,
  SP_REGIME_WEAKLY_IRR_CRITICAL = 1,
  SP_REGIME_BOTH_VALID = 2,
  SP_REGIME_UNSUPPORTED = 3,
} SpRegime;

typedef enum SpStatus {
  SP_STATUS_OK = 0,
  SP_STATUS_NULL_POINTER = 1,
  SP_STATUS_INVALID_ARGUMENT = 2,
  SP_STATUS_PARSE_ERROR = 3,
  SP_STATUS_INVALID_TENSOR = 4,
  SP_STATUS_INVALID_PARTITION = 5,
  SP_STATUS_INVALID_EXPONENT = 6,
  /**
   * the tensor is not σ-strictly nonnegative
   */
  SP_STATUS_STRUCTURAL_REJECTION = 7,
  /**
   * a partial result is still returned
   */
  SP_STATUS_MAX_ITER_EXCEEDED = 8,
  /**
   * a partial result is still returned
   */
  SP_STATUS_SINGULAR_NEWTON_SYSTEM = 9,
  /**
   * a partial result is still returned
   */
  SP_STATUS_LINE_SEARCH_FAILED = 10,
  SP_STATUS_PANIC = 11,
} SpStatus;

typedef struct SpProblem SpProblem;

typedef struct SpResult SpResult;

typedef struct SpTensor SpTensor;

typedef struct SpAssumptions {
  bool strict_nonneg;
  bool weakly_irreducible;
  double nu_over_p;
  /**
   * sign of `Σν/p - 1`: -1, 0 or 1
   */
  int32_t criticality;
  double rho_a;
  enum SpRegime regime;
} SpAssumptions;

typedef struct SpSolverOptions {
  double tol;
  size_t max_iter;
  double armijo_c;
  double backtrack_rho;
  size_t max_backtracks;
  /**
   * must hold one of the declared `SpMethod` values
   */
  enum SpMethod method;
} SpSolverOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or an empty string. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *sp_last_error_message(void);

/**
 * Parses a tensor in the text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SpStatus sp_tensor_parse(const char *text, struct SpTensor **out);

/**
 * Builds a tensor from `nnz` entries. `indices` holds `nnz * order`
 * one-based indices, entry by entry.
 *
 * # Safety
 * `dims` must point to `order` values, `indices` to `nnz * order` values and
 * `values` to `nnz` values (either may be NULL when `nnz == 0`).
 */
enum SpStatus sp_tensor_new(size_t order,
                            const size_t *dims,
                            size_t nnz,
                            const size_t *indices,
                            const double *values,
                            struct SpTensor **out);

/**
 * # Safety
 * `t` must be NULL or a handle from this library that has not been freed.
 */
void sp_tensor_free(struct SpTensor *t);

/**
 * Number of stored entries, or 0 for NULL.
 *
 * # Safety
 * `t` must be NULL or a live tensor handle.
 */
size_t sp_tensor_nnz(const struct SpTensor *t);

/**
 * Builds a problem. `partition` may be NULL for a single block. The tensor
 * is copied, so it may be freed afterwards.
 *
 * # Safety
 * `t` must be a live tensor handle, the strings NUL-terminated, `out` valid.
 */
enum SpStatus sp_problem_new(const struct SpTensor *t,
                             const char *partition,
                             const char *p,
                             struct SpProblem **out);

/**
 * # Safety
 * `prob` must be NULL or a live problem handle.
 */
void sp_problem_free(struct SpProblem *prob);

/**
 * Length `n` of the flat eigenvector, or 0 for NULL.
 *
 * # Safety
 * `prob` must be NULL or a live problem handle.
 */
size_t sp_problem_dim(const struct SpProblem *prob);

/**
 * # Safety
 * `prob` must be a live problem handle and `out` valid.
 */
enum SpStatus sp_problem_check(const struct SpProblem *prob, struct SpAssumptions *out);

struct SpSolverOptions sp_solver_options_default(void);

/**
 * Solves `prob`. `opts` may be NULL for the defaults. On
 * `MaxIterExceeded`, `SingularNewtonSystem` and `LineSearchFailed` the
 * partial result is still stored in `out` and must be freed.
 *
 * # Safety
 * `prob` must be a live problem handle, `opts` NULL or valid, `out` valid.
 */
enum SpStatus sp_solve(const struct SpProblem *prob,
                       const struct SpSolverOptions *opts,
                       struct SpResult **out);

/**
 * # Safety
 * `r` must be NULL or a live result handle.
 */
void sp_result_free(struct SpResult *r);

/**
 * `λ*`, or NaN for NULL.
 *
 * # Safety
 * `r` must be NULL or a live result handle.
 */
double sp_result_lambda_star(const struct SpResult *r);

/**
 * Final `Res`, or NaN for NULL.
 *
 * # Safety
 * `r` must be NULL or a live result handle.
 */
double sp_result_res(const struct SpResult *r);

/**
 * # Safety
 * `r` must be NULL or a live result handle.
 */
size_t sp_result_iterations(const struct SpResult *r);

/**
 * # Safety
 * `r` must be NULL or a live result handle.
 */
size_t sp_result_total_backtracks(const struct SpResult *r);

/**
 * # Safety
 * `r` must be NULL or a live result handle.
 */
bool sp_result_converged(const struct SpResult *r);

/**
 * Copies the flat normalized eigenvector into `buf`, which must hold at
 * least `sp_problem_dim` values.
 *
 * # Safety
 * `r` must be a live result handle and `buf` valid for `len` writes.
 */
enum SpStatus sp_result_x(const struct SpResult *r, double *buf, size_t len);

/**
 * The result as JSON. Free the string with [`sp_string_free`]. Returns NULL
 * for a NULL handle.
 *
 * # Safety
 * `r` must be NULL or a live result handle.
 */
char *sp_result_to_json(const struct SpResult *r);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void sp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRAL_FFI_H */
