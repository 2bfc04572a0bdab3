#include "harness/instances.hpp"

#include <cmath>

#include "karcher/geometry.hpp"
#include "karcher/solver.hpp"

namespace karcher::harness {

namespace {

std::vector<double> raw_mul(int n, const std::vector<double>& a,
                            const std::vector<double>& b) {
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      for (int j = 0; j < n; ++j) out[i * n + j] += aik * b[k * n + j];
    }
  return out;
}

std::vector<double> raw_transpose(int n, const std::vector<double>& a) {
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[j * n + i] = a[i * n + j];
  return out;
}

// Random orthogonal matrix from Gram-Schmidt on a Gaussian matrix.
std::vector<double> random_orthogonal(int n, SplitMix64& rng) {
  std::vector<double> q(static_cast<std::size_t>(n) * n);
  for (auto& v : q) v = rng.normal();
  for (int c = 0; c < n; ++c) {
    for (int prev = 0; prev < c; ++prev) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += q[i * n + c] * q[i * n + prev];
      for (int i = 0; i < n; ++i) q[i * n + c] -= dot * q[i * n + prev];
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += q[i * n + c] * q[i * n + c];
    norm = std::sqrt(norm);
    if (norm < 1e-8) return random_orthogonal(n, rng);  // retry degenerate draw
    for (int i = 0; i < n; ++i) q[i * n + c] /= norm;
  }
  return q;
}

}  // namespace

SymMatrix random_sym(int dim, SplitMix64& rng) {
  std::vector<double> e(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      const double v = rng.normal();
      e[i * dim + j] = v;
      e[j * dim + i] = v;
    }
  return SymMatrix(dim, e);
}

SpdMatrix random_spd(int dim, double scale, SplitMix64& rng) {
  if (scale == 0.0) return SpdMatrix::identity(dim);
  return spd_exp(scale * random_sym(dim, rng));
}

SpdMatrix random_spd(int dim, double scale, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_spd(dim, scale, rng);
}

std::vector<double> random_invertible(int dim, double log_cond,
                                      SplitMix64& rng) {
  const std::vector<double> q1 = random_orthogonal(dim, rng);
  const std::vector<double> q2 = random_orthogonal(dim, rng);
  std::vector<double> mid(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i)
    mid[i * dim + i] = std::exp(rng.uniform(-0.5 * log_cond, 0.5 * log_cond));
  return raw_mul(dim, raw_mul(dim, q1, mid), raw_transpose(dim, q2));
}

FiniteMeasure random_measure(int dim, int n_atoms, double scale,
                             SplitMix64& rng, bool uniform_weights) {
  std::vector<SpdMatrix> atoms;
  atoms.reserve(n_atoms);
  for (int i = 0; i < n_atoms; ++i) atoms.push_back(random_spd(dim, scale, rng));
  if (uniform_weights) return FiniteMeasure::uniform(std::move(atoms));
  std::vector<double> masses(n_atoms);
  for (double& m : masses)
    m = static_cast<double>(1 + static_cast<int>(rng.uniform01() * 9.0));
  double total = 0.0;
  for (double m : masses) total += m;
  for (double& m : masses) m /= total;
  return FiniteMeasure(std::move(atoms), std::move(masses));
}

FiniteMeasure shrink_toward(const SpdMatrix& x, const FiniteMeasure& mu,
                            double target_mean_distance) {
  const double c = mean_distance(x, mu);
  if (c <= target_mean_distance) return mu;
  const double t = target_mean_distance / c;
  std::vector<SpdMatrix> atoms;
  atoms.reserve(mu.size());
  for (int i = 0; i < mu.size(); ++i)
    atoms.push_back(geodesic(x, mu.atom(i), t));
  return FiniteMeasure(std::move(atoms), mu.weights());
}

SpdMatrix congruence_transform(const std::vector<double>& g,
                               const SpdMatrix& m) {
  const int n = m.dim();
  const std::vector<double> gm = raw_mul(n, g, m.entries());
  return SpdMatrix(n, raw_mul(n, gm, raw_transpose(n, g)));
}

SymMatrix whitened(const SpdMatrix& x, const SymMatrix& m) {
  const SpdMatrix w = spd_inv_sqrt(x);
  const int n = x.dim();
  return SymMatrix(n, raw_mul(n, raw_mul(n, w.entries(), m.entries()),
                              w.entries()));
}

SplitMix64 substream(std::uint64_t seed, std::uint64_t check_id,
                     std::uint64_t instance) {
  SplitMix64 base(seed ^ (check_id * 0x9E3779B97F4A7C15ull) ^
                  (instance * 0xD1B54A32D192ED03ull));
  return base.split();
}

}  // namespace karcher::harness
