#pragma once

#include <cstdint>
#include <vector>

#include "karcher/matrix.hpp"
#include "karcher/measure.hpp"
#include "karcher/rng.hpp"

namespace karcher::harness {

/// Symmetric matrix with i.i.d. standard normal upper-triangle entries.
SymMatrix random_sym(int dim, SplitMix64& rng);

/// exp(scale * W) for W = random_sym; d(result, I) <= scale * ||W||.
SpdMatrix random_spd(int dim, double scale, SplitMix64& rng);
SpdMatrix random_spd(int dim, double scale, std::uint64_t seed);

/// Random invertible G = Q1 diag(e^{u}) Q2^T with |u| <= log_cond/2, so the
/// condition number stays below e^{log_cond}.
std::vector<double> random_invertible(int dim, double log_cond,
                                      SplitMix64& rng);

/// Random measure; weights are integer masses 1..9 normalized (so they
/// rationalize exactly), or uniform when `uniform_weights`.
FiniteMeasure random_measure(int dim, int n_atoms, double scale,
                             SplitMix64& rng, bool uniform_weights = false);

/// Pulls every atom along its geodesic toward x until C(x) = sum w_i d(x,A_i)
/// equals target (no-op if already below). Keeps semigroup instances within
/// the resolvent-call budget of the a priori step-count formula.
FiniteMeasure shrink_toward(const SpdMatrix& x, const FiniteMeasure& mu,
                            double target_mean_distance);

/// General congruence G M G^T over raw row-major G (harness-side helper for
/// invariance checks).
SpdMatrix congruence_transform(const std::vector<double>& g, const SpdMatrix& m);

/// X^{-1/2} M X^{-1/2}, the whitened form used by several checks.
SymMatrix whitened(const SpdMatrix& x, const SymMatrix& m);

/// Deterministic substream for (seed, check id, instance index).
SplitMix64 substream(std::uint64_t seed, std::uint64_t check_id,
                     std::uint64_t instance);

}  // namespace karcher::harness
