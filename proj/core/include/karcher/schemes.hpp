#pragma once

#include <cstdint>
#include <vector>

#include "karcher/matrix.hpp"
#include "karcher/measure.hpp"
#include "karcher/solver.hpp"
#include "karcher/trace.hpp"

namespace karcher {

enum class SchemeKind { nodice, stochastic, truncated_stochastic };

struct SchemeSpec {
  SchemeKind kind = SchemeKind::nodice;
  long n_steps = 0;          // cycles for nodice, steps otherwise
  std::uint64_t seed = 0;    // stochastic kinds
  double radius = 0.0;       // truncated kind only (> 0 there, 0 otherwise)

  void validate() const;
};

/// Deterministic cyclic inductive means S_{n+1} = S_n #_{1/(n+1)} A_{n+1 mod k}
/// (residue 0 means atom k). Requires equal weights 1/k. Errors are recorded
/// to `reference` at every step; full iterates at cycle boundaries and
/// power-of-two indices.
IterationTrace nodice_sequence(const FiniteMeasure& mu, long n_cycles,
                               const SpdMatrix& reference);

/// Stochastic inductive means with i.i.d. draws from mu; deterministic in
/// the seed.
IterationTrace stochastic_sequence(const FiniteMeasure& mu, long n_steps,
                                   std::uint64_t seed,
                                   const SpdMatrix& reference);

/// Same recursion and the same seed-indexed draw stream as
/// stochastic_sequence, with each draw Y replaced by Y^R: atoms at distance
/// >= radius from `center` map to `center`. Errors are measured to `center`.
IterationTrace truncated_sequence(const FiniteMeasure& mu, long n_steps,
                                  std::uint64_t seed, double radius,
                                  const SpdMatrix& center);

/// Both coupled paths at once, with the pathwise gap d(X_n, X_n^R) and the
/// running-average bound (1/n) sum_i d(Y_i, Y_i^R) at every step.
struct CoupledTruncationRun {
  IterationTrace plain;      // errors to center
  IterationTrace truncated;  // errors to center
  std::vector<double> coupling_gap;
  std::vector<double> coupling_bound;
};
CoupledTruncationRun coupled_truncation_run(const FiniteMeasure& mu,
                                            long n_steps, std::uint64_t seed,
                                            double radius,
                                            const SpdMatrix& center);

/// Runs the coupled chains X_{k+1} = J^mu_{1/(l+k+1)}(X_k) and
/// Y_{k+1} = J^{nu_{k+1}}_{1/(l+k+1)}(Y_k) over all of `nus` and returns
/// {final distance, bound}: the bound is
///   (l+1)/(K+l+1) d(X0,Y0) + (1/(K+l+1)) sum_i W1(mu, nu_i).
std::pair<double, double> varying_measure_chain_gap(
    const FiniteMeasure& mu, const std::vector<FiniteMeasure>& nus,
    int l_offset, const SpdMatrix& x0, const SpdMatrix& y0,
    const SolverConfig& cfg = {});

/// Lipschitz estimate for the relative operator entropy:
/// lhs = ||log_X A - log_Y A||, rhs = d(X,A) e^{2 d(I,X)} (e^{d(X,Y)} - 1)
///       + e^{d(I,Y) + d(I,A)} d(X,Y).
std::pair<double, double> entropy_lipschitz_check(const SpdMatrix& a,
                                                  const SpdMatrix& x,
                                                  const SpdMatrix& y);

struct PerturbedResolventResult {
  SpdMatrix xhat;
  double dist = 0.0;
  double bound = 0.0;
};

/// Solves X - Y + E = log_Y(Xhat) by Xhat = exp_Y(X - Y + E) and bounds
/// d(Xhat, X) by the explicit remainder chain: with
///   m = (e^{d(X,Y)} - 1) + ||Y^{-1/2} E Y^{-1/2}||,
///   u = ||X^{-1/2} E X^{-1/2}|| + e^{d(X,Y)} m^2 e^m / 2,
/// the bound is u + u^2 / (2 (1 - u)). Requires d(X,Y) and both normalized
/// norms of E below 0.3 so the series apply.
PerturbedResolventResult perturbed_resolvent_solve(const SpdMatrix& x,
                                                   const SpdMatrix& y,
                                                   const SymMatrix& e);

struct EnvelopeCheckResult {
  bool holds = true;
  double max_violation = 0.0;  // max over k of a_k - envelope(k)
};

/// Closed-form decay envelopes for nonnegative sequences satisfying
/// a_{k+1} <= (1 - alpha/(k+1)) a_k + beta/(k+1)^2, run here with equality
/// (worst admissible case, clamped at zero). The envelope is enforced for
/// k in [k_min, k_max]; the first few indices sit above the asymptotic
/// envelope even for admissible sequences, so k_min defaults to 20.
EnvelopeCheckResult sequence_envelope_check(double alpha, double beta,
                                            double a0, long k_max,
                                            long k_min = 20,
                                            double slack = 1e-9);

}  // namespace karcher
