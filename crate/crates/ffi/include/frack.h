#ifndef FRACK_H
#define FRACK_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Forcing families that need no sampled data.
 */
typedef enum FrackForcing {
  /**
   * f = 1; both parameters ignored
   */
  FRACK_FORCING_CONSTANT = 0,
  /**
   * f = t^{ρ−1} with ρ = `p1`
   */
  FRACK_FORCING_POWER_LAW = 1,
  /**
   * f = t^{μ−1} E^γ_{ν,μ}(−(ct)^ν) with μ = `p1`, γ = `p2`
   */
  FRACK_FORCING_PRABHAKAR = 2,
} FrackForcing;

/**
 * Outcome of every call.
 */
typedef enum FrackStatus {
  FRACK_STATUS_OK = 0,
  FRACK_STATUS_INVALID_PARAMETER = 1,
  FRACK_STATUS_NON_CONVERGENCE = 2,
  FRACK_STATUS_DIVERGENT_PARAMETERS = 3,
  FRACK_STATUS_DEGENERATE_POLES = 4,
  FRACK_STATUS_CONTOUR_FAILURE = 5,
  FRACK_STATUS_NO_CANCELLABLE_PAIR = 6,
  FRACK_STATUS_GRID_TOO_COARSE = 7,
  FRACK_STATUS_QUADRATURE_FAILURE = 8,
  FRACK_STATUS_INVERSION_UNSTABLE = 9,
  FRACK_STATUS_OUT_OF_ASYMPTOTIC_REGIME = 10,
  FRACK_STATUS_INGESTION = 11,
  FRACK_STATUS_NULL_POINTER = 12,
  FRACK_STATUS_INDEX_OUT_OF_RANGE = 13,
  FRACK_STATUS_PANIC = 14,
} FrackStatus;

/**
 * Opaque kinetic problem.
 */
typedef struct FrackKinetic FrackKinetic;

/**
 * Opaque result table.
 */
typedef struct FrackTable FrackTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next frack call on the same thread.
 */
const char *frack_last_error(void);

/**
 * Static, human-readable name of a status code.
 */
const char *frack_status_name(enum FrackStatus status);

/**
 * E^γ_{α,β}(z).
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum FrackStatus frack_mittag_leffler(double alpha,
                                      double beta,
                                      double gamma,
                                      double z,
                                      double *out);

/**
 * Green's function of the space-time fractional diffusion equation, with
 * `c_pow_nu` the diffusion constant c^ν.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum FrackStatus frack_green_function(double nu, double c_pow_nu, double x, double t, double *out);

/**
 * Spatial Fourier mode of the Green's function.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum FrackStatus frack_fourier_mode(double nu, double c_pow_nu, double k, double t, double *out);

/**
 * Kinetic problem with an analytic forcing family.
 *
 * # Safety
 * `out` must be valid for a write; on success it receives a handle owned
 * by the caller.
 */
enum FrackStatus frack_kinetic_new(double nu,
                                   double c,
                                   double n0,
                                   enum FrackForcing forcing,
                                   double p1,
                                   double p2,
                                   struct FrackKinetic **out);

/**
 * Kinetic problem with forcing sampled at `len` strictly increasing times.
 *
 * # Safety
 * `t` and `f` must be valid for reads of `len` elements and `out` for a write.
 */
enum FrackStatus frack_kinetic_new_sampled(double nu,
                                           double c,
                                           double n0,
                                           const double *t,
                                           const double *f,
                                           size_t len,
                                           struct FrackKinetic **out);

/**
 * # Safety
 * `problem` must be NULL or a handle from `frack_kinetic_new*` not yet freed.
 */
void frack_kinetic_free(struct FrackKinetic *problem);

/**
 * Closed-form solution N(t). Sampled forcing has none and yields
 * `FRACK_STATUS_INVALID_PARAMETER`; use `frack_kinetic_solve` instead.
 *
 * # Safety
 * `problem` must be a live handle and `out` valid for a write.
 */
enum FrackStatus frack_kinetic_value(const struct FrackKinetic *problem, double t, double *out);

/**
 * Solution on a time grid, by the closed form or, when `use_oracle` is
 * nonzero, by the Volterra product-integration oracle (uniform grid from 0).
 *
 * # Safety
 * `problem` must be a live handle, `t` valid for reads of `len` elements and
 * `out` valid for a write; on success `*out` is a table owned by the caller.
 */
enum FrackStatus frack_kinetic_solve(const struct FrackKinetic *problem,
                                     const double *t,
                                     size_t len,
                                     int32_t use_oracle,
                                     struct FrackTable **out);

/**
 * Green's function profile over `len` positions at time `t`.
 *
 * # Safety
 * `x` must be valid for reads of `len` elements and `out` for a write.
 */
enum FrackStatus frack_green_profile(double nu,
                                     double c_pow_nu,
                                     double t,
                                     const double *x,
                                     size_t len,
                                     struct FrackTable **out);

/**
 * # Safety
 * `table` must be NULL or a table handle not yet freed.
 */
void frack_table_free(struct FrackTable *table);

/**
 * Number of rows.
 *
 * # Safety
 * `table` must be a live handle and `out` valid for a write.
 */
enum FrackStatus frack_table_len(const struct FrackTable *table, size_t *out);

/**
 * Row `row`: its first coordinate and its value.
 *
 * # Safety
 * `table` must be a live handle; `coordinate` and `value` valid for writes.
 */
enum FrackStatus frack_table_row(const struct FrackTable *table,
                                 size_t row,
                                 double *coordinate,
                                 double *value);

/**
 * Table serialized as CSV with 17 significant digits, NUL-terminated.
 * Release with `frack_string_free`.
 *
 * # Safety
 * `table` must be a live handle and `out` valid for a write.
 */
enum FrackStatus frack_table_to_csv(const struct FrackTable *table, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void frack_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACK_H */
