#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "karcher/matrix.hpp"

namespace karcher {

/// Finitely supported probability measure on the SPD cone. Weights are
/// renormalized to sum to one on construction; zero-weight atoms are
/// dropped; all atoms must share one dimension.
class FiniteMeasure {
 public:
  FiniteMeasure(std::vector<SpdMatrix> atoms, std::vector<double> weights);

  static FiniteMeasure dirac(const SpdMatrix& a);
  static FiniteMeasure uniform(std::vector<SpdMatrix> atoms);

  int dim() const { return atoms_.front().dim(); }
  int size() const { return static_cast<int>(atoms_.size()); }
  const SpdMatrix& atom(int i) const { return atoms_[i]; }
  double weight(int i) const { return weights_[i]; }
  const std::vector<SpdMatrix>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Cumulative weights for inverse-CDF sampling.
  const std::vector<double>& cumulative_weights() const { return cumulative_; }

 private:
  std::vector<SpdMatrix> atoms_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

/// Coupling between two finite measures: flow[i*cols + j] is the mass moved
/// from atom i of mu to atom j of nu; cost is the transported distance.
struct TransportPlan {
  int rows = 0;
  int cols = 0;
  std::vector<double> flow;
  double cost = 0.0;

  double at(int i, int j) const { return flow[static_cast<std::size_t>(i) * cols + j]; }
};

/// Exact L1-Wasserstein distance under the Thompson ground metric.
/// Weights are rationalized to a common denominator <= 10^6 (per-weight
/// error < 1e-9, otherwise throws) and the transportation problem is solved
/// as integer min-cost flow by successive shortest augmenting paths.
std::pair<double, TransportPlan> w1_distance(const FiniteMeasure& mu,
                                             const FiniteMeasure& nu);

/// (1-t) mu1 + t mu2. Atoms that are bitwise equal are merged.
FiniteMeasure convex_combine(double t, const FiniteMeasure& mu1,
                             const FiniteMeasure& mu2);

/// Replaces every atom at Thompson distance >= R from `center` by `center`
/// (weight reassigned to the center atom).
FiniteMeasure truncate(const FiniteMeasure& mu, const SpdMatrix& center,
                       double radius);

/// Uniform empirical measure on n i.i.d. draws from mu; deterministic in
/// the seed.
FiniteMeasure sample_empirical(const FiniteMeasure& mu, int n,
                               std::uint64_t seed);

/// Max pairwise Thompson distance over the support (0 for a single atom).
double diameter(const FiniteMeasure& mu);

/// FNV-1a digest of dims, weights and atom entries; identifies a measure in
/// trace metadata.
std::string measure_digest(const FiniteMeasure& mu);

}  // namespace karcher
