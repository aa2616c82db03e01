#ifndef STO_TWOCENTER_H
#define STO_TWOCENTER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define STO_KIND_OVERLAP 0

#define STO_KIND_NUCLEAR_ATTRACTION_A 1

#define STO_KIND_NUCLEAR_ATTRACTION_B 2

#define STO_METHOD_ANALYTIC 0

#define STO_METHOD_QUADRATURE 1

typedef enum StoStatus {
  STO_STATUS_OK = 0,
  /**
   * An argument is outside the domain of the requested quantity.
   */
  STO_STATUS_DOMAIN_ERROR = 1,
  /**
   * Valid request the analytic path cannot serve (noninteger `n`).
   */
  STO_STATUS_UNSUPPORTED = 2,
  /**
   * Quadrature hit its refinement cap.
   */
  STO_STATUS_NON_CONVERGENCE = 3,
  STO_STATUS_NULL_POINTER = 4,
  /**
   * Output buffer too small.
   */
  STO_STATUS_BUFFER_TOO_SMALL = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  STO_STATUS_INTERNAL = 6,
} StoStatus;

/**
 * Opaque expansion table.
 */
typedef struct StoProductTable StoProductTable;

typedef struct StoProductTerm {
  uint32_t k;
  uint32_t kp;
  uint32_t u;
  uint32_t s;
  /**
   * Nearest binary64 value of the exact coefficient.
   */
  double coeff;
  int32_t pow_plus;
  uint32_t pow_minus;
} StoProductTerm;

/**
 * One Slater-type orbital. `n` may be noninteger on the quadrature path.
 */
typedef struct StoOrbital {
  double n;
  uint32_t l;
  uint32_t lambda;
  double zeta;
} StoOrbital;

typedef struct StoIntegralResult {
  double value;
  double est_error;
  /**
   * `STO_METHOD_ANALYTIC` or `STO_METHOD_QUADRATURE`.
   */
  uint32_t method;
} StoIntegralResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *sto_last_error(void);

/**
 * Static description of a status code.
 */
const char *sto_status_str(enum StoStatus status);

/**
 * `P̄_lm(x)` from the closed form.
 *
 * # Safety
 * `out` must be NULL or valid for one `double` write.
 */
enum StoStatus sto_legendre(uint32_t l, uint32_t m, double x, double *out);

/**
 * `P̄_lm(x)` from the three-term recurrence.
 *
 * # Safety
 * `out` must be NULL or valid for one `double` write.
 */
enum StoStatus sto_legendre_recurrence(uint32_t l, uint32_t m, double x, double *out);

/**
 * Builds (or fetches from the shared cache) the table for `(l, λ, l')`.
 *
 * # Safety
 * `out` must be NULL or valid for one pointer write. The handle written
 * there must be released with `sto_product_table_free`.
 */
enum StoStatus sto_product_table_new(uint32_t l,
                                     uint32_t lambda,
                                     uint32_t lp,
                                     struct StoProductTable **out);

/**
 * Releases a table. NULL is ignored.
 *
 * # Safety
 * `table` must be NULL or a handle from `sto_product_table_new` that has not
 * been freed.
 */
void sto_product_table_free(struct StoProductTable *table);

/**
 * Number of terms; 0 for NULL.
 *
 * # Safety
 * `table` must be NULL or a live handle.
 */
size_t sto_product_table_len(const struct StoProductTable *table);

/**
 * Copies term `index` into `out`.
 *
 * # Safety
 * `table` must be NULL or a live handle; `out` NULL or valid for one write.
 */
enum StoStatus sto_product_table_term(const struct StoProductTable *table,
                                      size_t index,
                                      struct StoProductTerm *out);

/**
 * Sums the expansion at `(mu, nu)`, `mu > 1`, `|nu| < 1`.
 *
 * # Safety
 * `table` must be NULL or a live handle; `out` NULL or valid for one write.
 */
enum StoStatus sto_product_table_eval(const struct StoProductTable *table,
                                      double mu,
                                      double nu,
                                      double *out);

/**
 * Analytic overlap or nuclear-attraction integral; `kind` is one of the
 * `STO_KIND_*` constants. Noninteger `n` gives `Unsupported`.
 *
 * # Safety
 * `a`, `b` must be NULL or point to valid orbitals; `out` NULL or valid for one write.
 */
enum StoStatus sto_integral(const struct StoOrbital *a,
                            const struct StoOrbital *b,
                            double r,
                            uint32_t kind,
                            struct StoIntegralResult *out);

/**
 * The same integral by direct quadrature with default settings; accepts
 * noninteger `n`.
 *
 * # Safety
 * As `sto_integral`.
 */
enum StoStatus sto_integral_quadrature(const struct StoOrbital *a,
                                       const struct StoOrbital *b,
                                       double r,
                                       uint32_t kind,
                                       struct StoIntegralResult *out);

/**
 * Writes `A_0(p) ..= A_N(p)` into `out[0..=max_order]`.
 *
 * # Safety
 * `out` must be NULL or valid for `len` double writes.
 */
enum StoStatus sto_aux_a(size_t max_order, double p, double *out, size_t len);

/**
 * Writes `B_0(q) ..= B_N(q)` into `out[0..=max_order]`.
 *
 * # Safety
 * `out` must be NULL or valid for `len` double writes.
 */
enum StoStatus sto_aux_b(size_t max_order, double q, double *out, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STO_TWOCENTER_H */
