#include "karcher/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <stdexcept>

#include "dense_ops.hpp"
#include "karcher/geometry.hpp"
#include "karcher/rng.hpp"

namespace karcher {

namespace {

std::string atom_key(const SpdMatrix& m) {
  return std::string(reinterpret_cast<const char*>(m.entries().data()),
                     m.entries().size() * sizeof(double));
}

}  // namespace

FiniteMeasure::FiniteMeasure(std::vector<SpdMatrix> atoms,
                             std::vector<double> weights) {
  if (atoms.empty()) throw std::invalid_argument("measure needs atoms");
  if (atoms.size() != weights.size())
    throw std::invalid_argument("atom/weight count mismatch");
  const int dim = atoms.front().dim();
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].dim() != dim)
      throw std::invalid_argument("atoms must share one dimension");
    if (weights[i] < 0.0 || !std::isfinite(weights[i]))
      throw std::invalid_argument("weights must be nonnegative and finite");
    total += weights[i];
  }
  if (!(total > 0.0)) throw std::invalid_argument("total weight must be positive");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (weights[i] == 0.0) continue;  // zero-weight atoms dropped
    atoms_.push_back(std::move(atoms[i]));
    weights_.push_back(weights[i] / total);
  }
  cumulative_.resize(weights_.size());
  double run = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    run += weights_[i];
    cumulative_[i] = run;
  }
  cumulative_.back() = 1.0;
}

FiniteMeasure FiniteMeasure::dirac(const SpdMatrix& a) {
  return FiniteMeasure({a}, {1.0});
}

FiniteMeasure FiniteMeasure::uniform(std::vector<SpdMatrix> atoms) {
  std::vector<double> w(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  return FiniteMeasure(std::move(atoms), std::move(w));
}

namespace {

// Finds the smallest common denominator D <= 10^6 with round(w_i D)/D within
// 1e-9 of every weight and integer masses summing exactly to D per side.
long rationalize(const std::vector<double>& wa, const std::vector<double>& wb,
                 std::vector<long>& pa, std::vector<long>& pb) {
  constexpr long kMaxDen = 1000000;
  constexpr double kTol = 1e-9;
  for (long d = 1; d <= kMaxDen; ++d) {
    bool ok = true;
    long suma = 0, sumb = 0;
    pa.clear();
    pb.clear();
    for (double w : wa) {
      const long p = std::lround(w * d);
      if (p < 1 || std::abs(w - static_cast<double>(p) / d) >= kTol) {
        ok = false;
        break;
      }
      pa.push_back(p);
      suma += p;
    }
    if (!ok || suma != d) continue;
    for (double w : wb) {
      const long p = std::lround(w * d);
      if (p < 1 || std::abs(w - static_cast<double>(p) / d) >= kTol) {
        ok = false;
        break;
      }
      pb.push_back(p);
      sumb += p;
    }
    if (ok && sumb == d) return d;
  }
  throw std::runtime_error(
      "w1_distance: weights could not be rationalized to a common "
      "denominator <= 1e6 within 1e-9");
}

// Successive shortest augmenting paths on the bipartite transportation
// graph. Node layout: source = 0, mu atoms = 1..m, nu atoms = m+1..m+n,
// sink = m+n+1. Costs are the Thompson distances; Dijkstra with potentials
// keeps reduced costs nonnegative.
struct TransportSolver {
  int m, n;
  const std::vector<double>& dist;  // m*n ground distances
  std::vector<long> supply, demand;
  std::vector<long> flow;  // m*n units shipped

  TransportSolver(int m_, int n_, const std::vector<double>& d,
                  std::vector<long> s, std::vector<long> t)
      : m(m_), n(n_), dist(d), supply(std::move(s)), demand(std::move(t)),
        flow(static_cast<std::size_t>(m_) * n_, 0) {}

  double solve(long total) {
    const int nodes = m + n + 2;
    const int src = 0, snk = m + n + 1;
    std::vector<double> pot(nodes, 0.0);
    long shipped = 0;
    while (shipped < total) {
      // Dijkstra (dense) over the residual graph with reduced costs.
      std::vector<double> d(nodes, std::numeric_limits<double>::infinity());
      std::vector<int> prev(nodes, -1);
      std::vector<bool> done(nodes, false);
      d[src] = 0.0;
      for (int it = 0; it < nodes; ++it) {
        int u = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int v = 0; v < nodes; ++v)
          if (!done[v] && d[v] < best) {
            best = d[v];
            u = v;
          }
        if (u < 0) break;
        done[u] = true;
        // Reduced costs are clamped at zero and finalized nodes are never
        // touched again: roundoff can make a zero-reduced-cost arc pair look
        // negative, which would thread cycles through the prev pointers.
        auto relax = [&](int v, double rc) {
          if (done[v]) return;
          if (rc < 0.0) rc = 0.0;
          if (d[u] + rc < d[v]) {
            d[v] = d[u] + rc;
            prev[v] = u;
          }
        };
        if (u == src) {
          for (int i = 0; i < m; ++i)
            if (supply[i] > 0) relax(1 + i, 0.0);
        } else if (u >= 1 && u <= m) {
          const int i = u - 1;
          for (int j = 0; j < n; ++j)
            relax(1 + m + j, dist[static_cast<std::size_t>(i) * n + j] +
                                 pot[u] - pot[1 + m + j]);
        } else if (u >= 1 + m && u <= m + n) {
          const int j = u - 1 - m;
          if (demand[j] > 0) relax(snk, pot[u] - pot[snk]);
          for (int i = 0; i < m; ++i)
            if (flow[static_cast<std::size_t>(i) * n + j] > 0)
              relax(1 + i, -dist[static_cast<std::size_t>(i) * n + j] +
                               pot[u] - pot[1 + i]);
        }
      }
      if (prev[snk] < 0)
        throw std::runtime_error("w1_distance: no augmenting path (infeasible)");
      for (int v = 0; v < nodes; ++v)
        if (d[v] < std::numeric_limits<double>::infinity()) pot[v] += d[v];

      // Bottleneck along the path, then push.
      long delta = total - shipped;
      {
        int v = snk;
        while (v != src) {
          const int u = prev[v];
          if (u == src) {
            delta = std::min(delta, supply[v - 1]);
          } else if (v == snk) {
            delta = std::min(delta, demand[u - 1 - m]);
          } else if (u >= 1 && u <= m) {
            // forward arc, unbounded capacity
          } else {
            const int i = v - 1, j = u - 1 - m;
            delta = std::min(delta, flow[static_cast<std::size_t>(i) * n + j]);
          }
          v = u;
        }
      }
      {
        int v = snk;
        while (v != src) {
          const int u = prev[v];
          if (u == src) {
            supply[v - 1] -= delta;
          } else if (v == snk) {
            demand[u - 1 - m] -= delta;
          } else if (u >= 1 && u <= m) {
            flow[static_cast<std::size_t>(u - 1) * n + (v - 1 - m)] += delta;
          } else {
            flow[static_cast<std::size_t>(v - 1) * n + (u - 1 - m)] -= delta;
          }
          v = u;
        }
      }
      shipped += delta;
    }
    double cost = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        cost += static_cast<double>(flow[static_cast<std::size_t>(i) * n + j]) /
                total * dist[static_cast<std::size_t>(i) * n + j];
    return cost;
  }
};

}  // namespace

std::pair<double, TransportPlan> w1_distance(const FiniteMeasure& mu,
                                             const FiniteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw std::invalid_argument("dimension mismatch");
  const int m = mu.size(), n = nu.size();

  // Ground distances, computed once with the mu-side frames reused.
  std::vector<double> dist(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i) {
    const detail::Frame fi = detail::make_frame(mu.atom(i));
    for (int j = 0; j < n; ++j)
      dist[static_cast<std::size_t>(i) * n + j] =
          detail::thompson_from_frame(fi, nu.atom(j));
  }

  std::vector<long> pa, pb;
  const long den = rationalize(mu.weights(), nu.weights(), pa, pb);

  TransportSolver solver(m, n, dist, pa, pb);
  const double cost = solver.solve(den);

  TransportPlan plan;
  plan.rows = m;
  plan.cols = n;
  plan.flow.resize(static_cast<std::size_t>(m) * n);
  for (std::size_t k = 0; k < plan.flow.size(); ++k)
    plan.flow[k] = static_cast<double>(solver.flow[k]) / den;
  plan.cost = cost;
  return {cost, plan};
}

FiniteMeasure convex_combine(double t, const FiniteMeasure& mu1,
                             const FiniteMeasure& mu2) {
  if (mu1.dim() != mu2.dim()) throw std::invalid_argument("dimension mismatch");
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("mixture parameter must lie in [0,1]");

  std::vector<SpdMatrix> atoms;
  std::vector<double> weights;
  std::map<std::string, std::size_t> index;
  auto add = [&](const SpdMatrix& a, double w) {
    if (w == 0.0) return;
    const std::string key = atom_key(a);
    const auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, atoms.size());
      atoms.push_back(a);
      weights.push_back(w);
    } else {
      weights[it->second] += w;
    }
  };
  for (int i = 0; i < mu1.size(); ++i) add(mu1.atom(i), (1.0 - t) * mu1.weight(i));
  for (int i = 0; i < mu2.size(); ++i) add(mu2.atom(i), t * mu2.weight(i));
  return FiniteMeasure(std::move(atoms), std::move(weights));
}

FiniteMeasure truncate(const FiniteMeasure& mu, const SpdMatrix& center,
                       double radius) {
  if (mu.dim() != center.dim()) throw std::invalid_argument("dimension mismatch");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  const detail::Frame fc = detail::make_frame(center);
  std::vector<SpdMatrix> atoms;
  std::vector<double> weights;
  double center_mass = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    if (detail::thompson_from_frame(fc, mu.atom(i)) >= radius) {
      center_mass += mu.weight(i);
    } else {
      atoms.push_back(mu.atom(i));
      weights.push_back(mu.weight(i));
    }
  }
  if (center_mass > 0.0) {
    atoms.push_back(center);
    weights.push_back(center_mass);
  }
  return FiniteMeasure(std::move(atoms), std::move(weights));
}

FiniteMeasure sample_empirical(const FiniteMeasure& mu, int n,
                               std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  SplitMix64 rng(seed);
  std::vector<SpdMatrix> atoms;
  atoms.reserve(n);
  for (int i = 0; i < n; ++i)
    atoms.push_back(mu.atom(rng.pick(mu.cumulative_weights())));
  return FiniteMeasure::uniform(std::move(atoms));
}

double diameter(const FiniteMeasure& mu) {
  double best = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    const detail::Frame fi = detail::make_frame(mu.atom(i));
    for (int j = i + 1; j < mu.size(); ++j)
      best = std::max(best, detail::thompson_from_frame(fi, mu.atom(j)));
  }
  return best;
}

std::string measure_digest(const FiniteMeasure& mu) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ull;
    }
  };
  const int dim = mu.dim();
  mix(&dim, sizeof(dim));
  for (int i = 0; i < mu.size(); ++i) {
    const double w = mu.weight(i);
    mix(&w, sizeof(w));
    mix(mu.atom(i).entries().data(),
        mu.atom(i).entries().size() * sizeof(double));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace karcher
