#pragma once

#include <utility>
#include <vector>

#include "karcher/matrix.hpp"
#include "karcher/measure.hpp"
#include "karcher/trace.hpp"

namespace karcher {

struct SolverConfig {
  double residual_tol = 1e-10;  // on the base-point-normalized residual
  int max_iters = 500;
  double damping = 1.0;
  double min_damping = 1.0 / 64.0;
};

struct KarcherResult {
  SpdMatrix mean;
  double residual_norm = 0.0;  // ||X^{-1/2} V X^{-1/2}|| at the returned point
  int iterations = 0;
  bool converged = false;
};

/// Strictly increasing positive times t_1 < t_2 < ...; t_0 = 0 is implicit.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);
  static TimeGrid uniform(double horizon, int steps);
  /// t_i = sum_{j=offset+1}^{offset+i} 1/j.
  static TimeGrid harmonic(int steps, int offset = 0);

  const std::vector<double>& times() const { return times_; }
  int steps() const { return static_cast<int>(times_.size()); }
  double horizon() const { return times_.back(); }
  double step(int i) const;  // tau_{i+1} = t_{i+1} - t_i, 0-based
  double sum_squared_steps() const;

 private:
  std::vector<double> times_;
};

/// Karcher vector field sum_i w_i log_X(A_i); zero exactly at the mean.
SymMatrix karcher_residual(const SpdMatrix& x, const FiniteMeasure& mu);

/// ||X^{-1/2} karcher_residual(X, mu) X^{-1/2}|| — the solver's stopping
/// metric, invariant under congruence of the whole configuration.
double normalized_residual_norm(const SpdMatrix& x, const FiniteMeasure& mu);

/// C(X) = sum_i w_i d(X, A_i), the first moment of mu seen from X.
double mean_distance(const SpdMatrix& x, const FiniteMeasure& mu);

/// exp(sum_i w_i log A_i): exact for commuting atoms; the solver's start.
SpdMatrix log_euclidean_mean(const FiniteMeasure& mu);

/// Karcher mean by damped fixed-point iteration
/// X <- exp_X(alpha * karcher_residual(X, mu)); alpha halves (down to
/// min_damping) on a step that fails to reduce the normalized residual,
/// then resets. Non-convergence is reported in the result, never silent.
KarcherResult karcher_mean(const FiniteMeasure& mu, const SolverConfig& cfg = {});
KarcherResult karcher_mean_from(const FiniteMeasure& mu, const SolverConfig& cfg,
                                const SpdMatrix& initial);

/// Resolvent J_lambda(X): the Karcher mean of the blend
/// (lambda/(1+lambda)) mu + (1/(1+lambda)) delta_X, warm-started at X.
/// Throws std::runtime_error if the inner solve does not converge.
SpdMatrix resolvent(double lambda, const FiniteMeasure& mu, const SpdMatrix& x,
                    const SolverConfig& cfg = {});

/// Thompson gap between the two sides of the resolvent identity
/// J_tau(X) = J_lambda(J_tau(X) #_{lambda/tau} X), for tau > lambda > 0.
double resolvent_identity_gap(double tau, double lambda, const FiniteMeasure& mu,
                              const SpdMatrix& x, const SolverConfig& cfg = {});

/// Verifies d(J_lambda(X), X) <= lambda/(1+lambda) C(X) for each lambda and
/// the composed-chain analogue with the summed prefactors; slack 1e-8.
bool resolvent_bound_check(const std::vector<double>& lambdas,
                           const FiniteMeasure& mu, const SpdMatrix& x,
                           const SolverConfig& cfg = {});

/// Flow map S(t)X = lim_n (J_{t/n})^n X, evaluated as the n-fold resolvent
/// chain with n = ceil(2 (t C(X) / flow_tol)^2), which the two-scale bound
/// guarantees lands within flow_tol of the limit. S(0)X == X exactly.
/// Throws std::runtime_error when n would exceed 10^7 resolvent calls.
SpdMatrix semigroup(double t, const FiniteMeasure& mu, const SpdMatrix& x,
                    double flow_tol, const SolverConfig& cfg = {});

/// Runs the two resolvent chains over the grids from the common start X and
/// returns {d(X_m, Xhat_n), Kobayashi bound}.
std::pair<double, double> kobayashi_gap(const TimeGrid& grid1,
                                        const TimeGrid& grid2,
                                        const FiniteMeasure& mu,
                                        const SpdMatrix& x,
                                        const SolverConfig& cfg = {});

/// Proximal point iteration X_k = J_{1/(k + d_offset)}(X_{k-1}).
/// Errors are measured to karcher_mean(mu) at residual_tol 1e-12.
IterationTrace proximal_sequence(const FiniteMeasure& mu, const SpdMatrix& x0,
                                 int d_offset, int n_steps,
                                 const SolverConfig& cfg = {});

/// Explicit Euler in exponential coordinates:
/// X <- exp_X(h * karcher_residual(X, mu)), h = t_end / n_steps.
SpdMatrix euler_flow(double t_end, int n_steps, const FiniteMeasure& mu,
                     const SpdMatrix& x0);

/// Checks || J^{-1/2} (log_J X - (X - J)) J^{-1/2} || <= K (C lambda)^2 for
/// J = J_lambda(X), with the explicit constant
/// K = e^{lambda C} / (2 (2 - e^{lambda C})) * ((e^{lambda C}-1)/(lambda C))^2,
/// valid for lambda < log(2)/C(X); slack 1e-9.
bool resolvent_asymptotics_check(double lambda, const FiniteMeasure& mu,
                                 const SpdMatrix& x,
                                 const SolverConfig& cfg = {});

namespace internal {
/// One resolvent application with an explicit inner tolerance; chains use
/// tightened per-step tolerances (residual_tol / chain length, floored at
/// 1e-14, the smallest reliably reachable normalized residual in doubles).
SpdMatrix resolvent_step(double lambda, const FiniteMeasure& mu,
                         const SpdMatrix& x, const SolverConfig& cfg,
                         double step_tol);
}  // namespace internal

}  // namespace karcher
