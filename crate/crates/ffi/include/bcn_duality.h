#ifndef BCN_DUALITY_H
#define BCN_DUALITY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every function of the C API.
typedef enum BcnStatus {
  // Success.
  BCN_OK = 0,
  // A required pointer argument was null.
  BCN_NULL_POINTER = 1,
  // An argument has the wrong length or an unsupported value.
  BCN_INVALID_ARGUMENT = 2,
  // Model parameters violate an invariant.
  BCN_INVALID_PARAMETERS = 3,
  // The input lies outside the domain of the operation.
  BCN_DOMAIN_ERROR = 4,
  // A numerical procedure failed (singular matrix, no convergence, ...).
  BCN_NUMERICAL_ERROR = 5,
  // An internal panic was caught at the boundary.
  BCN_PANIC = 6,
} BcnStatus;

// Which Hamiltonian drives [`bcn_flow_integrate`].
typedef enum BcnFlowKind {
  // The hyperbolic many-body Hamiltonian on `(λ, θ)`.
  BCN_FLOW_H = 0,
  // The dual Hamiltonian on `(λ̂, θ̂)`.
  BCN_FLOW_HHAT = 1,
  // `Σ cosh(2jλ_l)` on `(λ, θ)`; uses the `j` argument.
  BCN_FLOW_ACTION_M = 2,
  // `Σ P_j(e^{λ̂_a})` on `(λ̂, θ̂)`; uses the `j` argument.
  BCN_FLOW_ACTION_HAT = 3,
} BcnFlowKind;

// Opaque model parameters `(n, μ, u, v)`.
typedef struct BcnParams BcnParams;

// Opaque sampled chart trajectory.
typedef struct BcnTrajectory BcnTrajectory;

// Opaque admissible triple.
typedef struct BcnTriple BcnTriple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *bcn_version(void);

// Copy the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len` bytes). Returns the length of the full message
// without the terminator, or 0 if there is none.
size_t bcn_last_error_message(char *buf, size_t len);

// Create a parameter handle; fails with `BCN_INVALID_PARAMETERS` unless
// `n ≥ 1`, `μ > 0` and `|u| ≠ |v|`.
enum BcnStatus bcn_params_new(size_t n, double mu, double u, double v, struct BcnParams **out);

// Release a parameter handle (null is ignored).
void bcn_params_free(struct BcnParams *params);

// Particle number of a parameter handle (0 for null).
size_t bcn_params_n(const struct BcnParams *params);

// Build the admissible triple of the global coordinates `ζ ∈ ℂⁿ`.
enum BcnStatus bcn_triple_from_zeta(const struct BcnParams *params,
                                    const double *zeta_re,
                                    const double *zeta_im,
                                    size_t len,
                                    struct BcnTriple **out);

// Release a triple handle (null is ignored).
void bcn_triple_free(struct BcnTriple *triple);

// Copy the positions `λ` of a triple into `out[0..len]`; `len` must equal `n`.
enum BcnStatus bcn_triple_lambda(const struct BcnTriple *triple, double *out, size_t len);

// Largest admissibility residual of a triple.
enum BcnStatus bcn_triple_residual(const struct BcnTriple *triple,
                                   const struct BcnParams *params,
                                   double *out);

// Recover the global coordinates `ζ` of a triple (gauge-fixed normal form).
enum BcnStatus bcn_triple_zeta(const struct BcnTriple *triple,
                               const struct BcnParams *params,
                               double *zeta_re,
                               double *zeta_im,
                               size_t len);

// Dual actions `λ̂` (descending) of the point with coordinates `ζ`.
enum BcnStatus bcn_hat_actions(const struct BcnParams *params,
                               const double *zeta_re,
                               const double *zeta_im,
                               size_t len,
                               double *out);

// The many-body Hamiltonian `H(λ, θ)`.
enum BcnStatus bcn_h_main(const struct BcnParams *params,
                          const double *lambda,
                          const double *theta,
                          size_t len,
                          double *out);

// The dual Hamiltonian `Ĥ(λ̂, θ̂)`.
enum BcnStatus bcn_h_hat_main(const struct BcnParams *params,
                              const double *hat_lambda,
                              const double *theta_hat,
                              size_t len,
                              double *out);

// Integrate a chart flow from `(pos, ang)` up to `t_end` with step `dt`.
// A trajectory that reaches the chart boundary stops there; see
// [`bcn_trajectory_boundary_time`].
enum BcnStatus bcn_flow_integrate(const struct BcnParams *params,
                                  enum BcnFlowKind kind,
                                  int j,
                                  const double *pos,
                                  const double *ang,
                                  size_t len,
                                  double t_end,
                                  double dt,
                                  struct BcnTrajectory **out);

// Release a trajectory handle (null is ignored).
void bcn_trajectory_free(struct BcnTrajectory *traj);

// Number of samples of a trajectory (0 for null).
size_t bcn_trajectory_len(const struct BcnTrajectory *traj);

// Read sample `index`: time, energy and the `len = n` positions and angles.
// Any of the out-pointers may be null to skip that field.
enum BcnStatus bcn_trajectory_sample(const struct BcnTrajectory *traj,
                                     size_t index,
                                     double *time,
                                     double *energy,
                                     double *pos,
                                     double *ang,
                                     size_t len);

// Least-squares slope of the relative energy error against time.
enum BcnStatus bcn_trajectory_energy_drift(const struct BcnTrajectory *traj, double *out);

// Time at which the trajectory reached the chart boundary; writes `-1` when
// it stayed inside the chart.
enum BcnStatus bcn_trajectory_boundary_time(const struct BcnTrajectory *traj, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BCN_DUALITY_H */
