#include "harness/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "harness/instances.hpp"
#include "harness/parallel.hpp"
#include "karcher/geometry.hpp"
#include "karcher/schemes.hpp"

namespace karcher::harness {

namespace {

using Clock = std::chrono::steady_clock;

struct Margin {
  double lhs;
  double rhs;
  double slack;
};

// Runs `worker` over `count` independent instances (seeded substreams) and
// folds the produced margins into one named CheckResult.
template <class Worker>
CheckResult run_cases(const VerifyOptions& o, const char* name,
                      std::uint64_t check_id, long count, Worker&& worker) {
  const auto t0 = Clock::now();
  std::vector<std::vector<Margin>> margins(count);
  parallel_for(count, o.threads, [&](long i) {
    SplitMix64 rng = substream(o.seed, check_id, static_cast<std::uint64_t>(i));
    worker(rng, i, margins[static_cast<std::size_t>(i)]);
  });
  CheckResult c;
  c.name = name;
  for (const auto& list : margins)
    for (const Margin& m : list) c.record(m.lhs, m.rhs, m.slack);
  c.finish();
  c.millis = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return c;
}

// Instance family for the flow checks: a point with a measure pulled close
// enough that the a priori resolvent-step count stays affordable.
struct FlowInstance {
  FiniteMeasure mu;
  SpdMatrix x;
};

FlowInstance flow_instance(SplitMix64& rng, int dim, double target_c) {
  SpdMatrix x = random_spd(dim, 0.01, rng);
  const int k = 3 + static_cast<int>(rng.uniform01() * 2.0);
  FiniteMeasure raw = random_measure(dim, k, 0.01, rng, true);
  FiniteMeasure mu = shrink_toward(x, raw, target_c);
  return {std::move(mu), std::move(x)};
}

constexpr double kFlowTargetC = 0.02;

// A point at an exact small Thompson distance from x.
SpdMatrix point_near(const SpdMatrix& x, double dist, SplitMix64& rng) {
  const SpdMatrix other = random_spd(x.dim(), 0.2, rng);
  const double d = thompson_distance(x, other);
  return geodesic(x, other, std::min(1.0, dist / d));
}

}  // namespace

CheckResult check_emi(const VerifyOptions& o, long pairs) {
  const double slack = o.inject_violation ? -1.0 : 1e-10;
  return run_cases(o, "emi", 1, pairs,
                   [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
                     const int dim = o.dim_for(i);
                     const SpdMatrix x = random_spd(dim, 0.7, rng);
                     const SpdMatrix y = random_spd(dim, 0.7, rng);
                     const double lhs = spectral_norm(spd_log(x) - spd_log(y));
                     out.push_back({lhs, thompson_distance(x, y), slack});
                   });
}

CheckResult check_order_sandwich(const VerifyOptions& o, long cases) {
  return run_cases(o, "order_sandwich", 2, cases,
                   [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
                     const int dim = o.dim_for(i);
                     const SpdMatrix x = random_spd(dim, 0.7, rng);
                     const SpdMatrix y = random_spd(dim, 0.7, rng);
                     const double d = thompson_distance(x, y);
                     const SymMatrix w = whitened(x, y);
                     const SymMatrix lo = std::exp(-d) * SymMatrix::identity(dim);
                     const SymMatrix hi = std::exp(d) * SymMatrix::identity(dim);
                     out.push_back({loewner_leq(lo, w) ? 0.0 : 1.0, 0.0, 0.0});
                     out.push_back({loewner_leq(w, hi) ? 0.0 : 1.0, 0.0, 0.0});
                     // congruence-free variant: e^{-d} X <= Y <= e^{d} X
                     out.push_back(
                         {loewner_leq(std::exp(-d) * x, y) ? 0.0 : 1.0, 0.0, 0.0});
                     out.push_back(
                         {loewner_leq(y, std::exp(d) * x) ? 0.0 : 1.0, 0.0, 0.0});
                   });
}

CheckResult check_metric_axioms(const VerifyOptions& o, long triples) {
  return run_cases(o, "metric_axioms", 3, triples,
                   [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
                     const int dim = o.dim_for(i);
                     const SpdMatrix a = random_spd(dim, 0.7, rng);
                     const SpdMatrix b = random_spd(dim, 0.7, rng);
                     const SpdMatrix c = random_spd(dim, 0.7, rng);
                     const double dab = thompson_distance(a, b);
                     const double dba = thompson_distance(b, a);
                     const double dac = thompson_distance(a, c);
                     const double dbc = thompson_distance(b, c);
                     out.push_back({std::abs(dab - dba), 0.0, 1e-12});
                     out.push_back({dac, dab + dbc, 1e-10});
                     out.push_back({thompson_distance(a, a), 0.0, 1e-12});
                   });
}

CheckResult check_invariance(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "invariance", 4, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const SpdMatrix x = random_spd(dim, 0.7, rng);
        const SpdMatrix y = random_spd(dim, 0.7, rng);
        const double d = thompson_distance(x, y);
        const std::vector<double> g = random_invertible(dim, 3.0, rng);
        const double d_congr = thompson_distance(congruence_transform(g, x),
                                                 congruence_transform(g, y));
        const double d_inv =
            thompson_distance(spd_inverse(x), spd_inverse(y));
        out.push_back({std::abs(d_congr - d), 0.0, 1e-9});
        out.push_back({std::abs(d_inv - d), 0.0, 1e-9});
      });
}

CheckResult check_w1_metric(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "w1_metric", 5, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const FiniteMeasure mu = random_measure(dim, 2 + i % 4, 0.5, rng);
        const FiniteMeasure nu = random_measure(dim, 2 + (i + 1) % 4, 0.5, rng);
        const FiniteMeasure rho = random_measure(dim, 2 + (i + 2) % 4, 0.5, rng);
        const auto [dmn, plan] = w1_distance(mu, nu);
        const auto [dnm, plan_back] = w1_distance(nu, mu);
        out.push_back({std::abs(dmn - dnm), 0.0, 1e-10});
        out.push_back({dmn, w1_distance(mu, rho).first +
                                w1_distance(rho, nu).first, 1e-9});
        out.push_back({w1_distance(mu, mu).first, 0.0, 1e-12});

        // plan feasibility: marginals within 1e-10
        for (int r = 0; r < plan.rows; ++r) {
          double sum = 0.0;
          for (int s = 0; s < plan.cols; ++s) sum += plan.at(r, s);
          out.push_back({std::abs(sum - mu.weight(r)), 0.0, 1e-10});
        }
        for (int s = 0; s < plan.cols; ++s) {
          double sum = 0.0;
          for (int r = 0; r < plan.rows; ++r) sum += plan.at(r, s);
          out.push_back({std::abs(sum - nu.weight(s)), 0.0, 1e-10});
        }

        // optimality certificate: no random feasible plan does better
        const int m = mu.size(), n = nu.size();
        std::vector<double> dist(static_cast<std::size_t>(m) * n);
        for (int r = 0; r < m; ++r)
          for (int s = 0; s < n; ++s)
            dist[r * n + s] = thompson_distance(mu.atom(r), nu.atom(s));
        for (int trial = 0; trial < 200; ++trial) {
          std::vector<int> order(static_cast<std::size_t>(m) * n);
          std::iota(order.begin(), order.end(), 0);
          for (int k = static_cast<int>(order.size()) - 1; k > 0; --k)
            std::swap(order[k],
                      order[static_cast<int>(rng.uniform01() * (k + 1))]);
          std::vector<double> row(mu.weights()), col(nu.weights());
          double cost = 0.0;
          for (int cell : order) {
            const int r = cell / n, s = cell % n;
            const double f = std::min(row[r], col[s]);
            if (f <= 0.0) continue;
            cost += f * dist[cell];
            row[r] -= f;
            col[s] -= f;
          }
          out.push_back({dmn, cost, 1e-12});
        }
      });
}

CheckResult check_w1_convexity(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "w1_convexity", 6, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const FiniteMeasure mu1 = random_measure(dim, 3, 0.5, rng);
        const FiniteMeasure mu2 = random_measure(dim, 2, 0.5, rng);
        const FiniteMeasure nu1 = random_measure(dim, 3, 0.5, rng);
        const FiniteMeasure nu2 = random_measure(dim, 4, 0.5, rng);
        const double t = static_cast<double>(1 + i % 7) / 8.0;
        const double lhs = w1_distance(convex_combine(t, mu1, mu2),
                                       convex_combine(t, nu1, nu2)).first;
        const double rhs = (1.0 - t) * w1_distance(mu1, nu1).first +
                           t * w1_distance(mu2, nu2).first;
        out.push_back({lhs, rhs, 1e-9});
      });
}

CheckResult check_lambda_contraction(const VerifyOptions& o, long pairs) {
  return run_cases(
      o, "lambda_contraction", 7, pairs,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const int ka = 2 + static_cast<int>(rng.uniform01() * 5.0);
        const int kb = 2 + static_cast<int>(rng.uniform01() * 5.0);
        const FiniteMeasure mu = random_measure(dim, ka, 0.5, rng);
        const FiniteMeasure nu = random_measure(dim, kb, 0.5, rng);
        const SolverConfig cfg = o.solver_config();
        const KarcherResult a = karcher_mean(mu, cfg);
        const KarcherResult b = karcher_mean(nu, cfg);
        if (!a.converged || !b.converged) {
          out.push_back({1.0, 0.0, 0.0});  // solver failure fails the check
          return;
        }
        out.push_back({thompson_distance(a.mean, b.mean),
                       w1_distance(mu, nu).first, 1e-7});
      });
}

CheckResult check_two_point_exactness(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "two_point_exactness", 8, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const SpdMatrix a = random_spd(dim, 0.6, rng);
        const SpdMatrix b = random_spd(dim, 0.6, rng);
        const double t = rng.uniform01();
        const FiniteMeasure mu({a, b}, {1.0 - t, t});
        const KarcherResult r = karcher_mean(mu, o.solver_config());
        if (!r.converged) {
          out.push_back({1.0, 0.0, 0.0});
          return;
        }
        out.push_back(
            {thompson_distance(r.mean, geodesic(a, b, t)), 0.0, 1e-8});
      });
}

CheckResult check_resolvent_contraction(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "resolvent_contraction", 9, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const FiniteMeasure mu = random_measure(dim, 4, 0.5, rng);
        const SpdMatrix x = random_spd(dim, 0.5, rng);
        const SpdMatrix y = random_spd(dim, 0.5, rng);
        const double lambda = std::exp(rng.uniform(std::log(0.01), std::log(10.0)));
        const SolverConfig cfg = o.solver_config();
        const double lhs = thompson_distance(resolvent(lambda, mu, x, cfg),
                                             resolvent(lambda, mu, y, cfg));
        out.push_back(
            {lhs, thompson_distance(x, y) / (1.0 + lambda), 1e-8});
      });
}

CheckResult check_resolvent_identity(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "resolvent_identity", 10, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const FiniteMeasure mu = random_measure(dim, 3, 0.5, rng);
        const SpdMatrix x = random_spd(dim, 0.5, rng);
        const double tau = rng.uniform(0.2, 2.0);
        const double lambda = tau * rng.uniform(0.05, 0.95);
        const SolverConfig cfg = o.solver_config();
        out.push_back({resolvent_identity_gap(tau, lambda, mu, x, cfg), 0.0,
                       100.0 * cfg.residual_tol});
      });
}

CheckResult check_resolvent_bounds(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "resolvent_bounds", 11, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const FiniteMeasure mu = random_measure(dim, 4, 0.5, rng);
        const SpdMatrix x = random_spd(dim, 0.5, rng);
        std::vector<double> lambdas(1 + i % 5);
        for (double& l : lambdas) l = rng.uniform(0.05, 2.0);
        out.push_back({resolvent_bound_check(lambdas, mu, x, o.solver_config())
                           ? 0.0
                           : 1.0,
                       0.0, 0.0});
      });
}

CheckResult check_resolvent_asymptotics(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "resolvent_asymptotics", 12, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const FiniteMeasure mu = random_measure(dim, 4, 0.5, rng);
        const SpdMatrix x = random_spd(dim, 0.5, rng);
        const double c = mean_distance(x, mu);
        const double lambda = rng.uniform(0.1, 0.9) * std::log(2.0) / c;
        out.push_back({resolvent_asymptotics_check(lambda, mu, x,
                                                   o.solver_config())
                           ? 0.0
                           : 1.0,
                       0.0, 0.0});
      });
}

CheckResult check_kobayashi(const VerifyOptions& o, long grid_pairs) {
  return run_cases(
      o, "kobayashi", 13, grid_pairs,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const FiniteMeasure mu = random_measure(dim, 4, 0.4, rng);
        const SpdMatrix x = random_spd(dim, 0.4, rng);
        TimeGrid g1 = TimeGrid::uniform(1.0, 1);
        TimeGrid g2 = g1;
        switch (i % 3) {
          case 0: {  // uniform vs uniform, same horizon, different steps
            const double horizon = rng.uniform(0.5, 3.0);
            g1 = TimeGrid::uniform(horizon, 2 + static_cast<int>(rng.uniform01() * 198));
            g2 = TimeGrid::uniform(horizon, 2 + static_cast<int>(rng.uniform01() * 198));
            break;
          }
          case 1: {  // harmonic vs uniform with matched horizon
            const int n = 10 + static_cast<int>(rng.uniform01() * 190);
            g1 = TimeGrid::harmonic(n);
            g2 = TimeGrid::uniform(g1.horizon(), n);
            break;
          }
          default: {  // rough random grids, mismatched horizons
            auto random_grid = [&rng]() {
              const int n = 2 + static_cast<int>(rng.uniform01() * 18);
              std::vector<double> t(n);
              double run = 0.0;
              for (double& v : t) {
                run += rng.uniform(0.01, 0.4);
                v = run;
              }
              return TimeGrid(std::move(t));
            };
            g1 = random_grid();
            g2 = random_grid();
            break;
          }
        }
        const auto [lhs, rhs] = kobayashi_gap(g1, g2, mu, x, o.solver_config());
        out.push_back({lhs, rhs, 1e-7});
      });
}

CheckResult check_two_scale(const VerifyOptions& o, long instances) {
  return run_cases(
      o, "two_scale", 14, instances,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const FiniteMeasure mu = random_measure(dim, 4, 0.4, rng);
        const SpdMatrix x = random_spd(dim, 0.4, rng);
        const double c = mean_distance(x, mu);
        const SolverConfig cfg = o.solver_config();
        for (const double t : {0.5, 2.0}) {
          for (const auto& [m, n] :
               std::vector<std::pair<int, int>>{{2, 4}, {4, 16}, {8, 64}}) {
            auto chain = [&](int steps) {
              SpdMatrix y = x;
              for (int s = 0; s < steps; ++s)
                y = internal::resolvent_step(t / steps, mu, y, cfg,
                                             cfg.residual_tol / steps);
              return y;
            };
            const double lhs = thompson_distance(chain(n), chain(m));
            const double rhs = t * std::sqrt(1.0 / m + 1.0 / n) * c;
            out.push_back({lhs, rhs, 1e-7});
          }
        }
      });
}

CheckResult check_semigroup_law(const VerifyOptions& o, long instances) {
  return run_cases(
      o, "semigroup_law", 15, instances,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const FlowInstance fi = flow_instance(rng, o.dim_for(i), kFlowTargetC);
        const double s = rng.uniform(0.3, 0.7);
        const double t = rng.uniform(0.3, 0.7);
        const SolverConfig cfg = o.solver_config();
        const SpdMatrix a = semigroup(s + t, fi.mu, fi.x, o.flow_tol, cfg);
        const SpdMatrix b = semigroup(
            t, fi.mu, semigroup(s, fi.mu, fi.x, o.flow_tol, cfg), o.flow_tol,
            cfg);
        out.push_back({thompson_distance(a, b), 0.0, 3.0 * o.flow_tol});
      });
}

CheckResult check_flow_contraction(const VerifyOptions& o, long instances) {
  return run_cases(
      o, "flow_contraction", 16, instances,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const FlowInstance fi = flow_instance(rng, o.dim_for(i), kFlowTargetC);
        const SpdMatrix y = point_near(fi.x, 0.01, rng);
        const double t = rng.uniform(0.4, 1.2);
        const SolverConfig cfg = o.solver_config();
        const double lhs =
            thompson_distance(semigroup(t, fi.mu, fi.x, o.flow_tol, cfg),
                              semigroup(t, fi.mu, y, o.flow_tol, cfg));
        out.push_back({lhs,
                       std::exp(-t) * thompson_distance(fi.x, y),
                       2.0 * o.flow_tol});
      });
}

CheckResult check_stationarity(const VerifyOptions& o, long instances) {
  return run_cases(
      o, "stationarity", 17, instances,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const FlowInstance fi = flow_instance(rng, o.dim_for(i), kFlowTargetC);
        const SolverConfig cfg = o.solver_config();
        const KarcherResult mean = karcher_mean(fi.mu, cfg);
        if (!mean.converged) {
          out.push_back({1.0, 0.0, 0.0});
          return;
        }
        const SpdMatrix s1 = semigroup(1.0, fi.mu, mean.mean, o.flow_tol, cfg);
        out.push_back({thompson_distance(s1, mean.mean), 0.0,
                       o.flow_tol + 10.0 * cfg.residual_tol});
      });
}

CheckResult check_mean_convergence(const VerifyOptions& o, long instances) {
  return run_cases(
      o, "mean_convergence", 18, instances,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const FlowInstance fi = flow_instance(rng, o.dim_for(i), kFlowTargetC);
        const SolverConfig cfg = o.solver_config();
        const KarcherResult mean = karcher_mean(fi.mu, cfg);
        if (!mean.converged) {
          out.push_back({1.0, 0.0, 0.0});
          return;
        }
        const double d0 = thompson_distance(fi.x, mean.mean);
        for (const double t : {0.5, 1.0, 2.0}) {
          const SpdMatrix st = semigroup(t, fi.mu, fi.x, o.flow_tol, cfg);
          out.push_back({thompson_distance(st, mean.mean),
                         std::exp(-t) * d0, 2.0 * o.flow_tol});
        }
      });
}

CheckResult check_time_lipschitz(const VerifyOptions& o, long instances) {
  return run_cases(
      o, "time_lipschitz", 19, instances,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const FlowInstance fi = flow_instance(rng, o.dim_for(i), kFlowTargetC);
        const double s = rng.uniform(0.3, 0.6);
        const double t = s + rng.uniform(0.1, 0.5);
        const SolverConfig cfg = o.solver_config();
        const double lhs =
            thompson_distance(semigroup(s, fi.mu, fi.x, o.flow_tol, cfg),
                              semigroup(t, fi.mu, fi.x, o.flow_tol, cfg));
        out.push_back({lhs, (t - s) * mean_distance(fi.x, fi.mu),
                       2.0 * o.flow_tol});
      });
}

CheckResult check_ode_consistency(const VerifyOptions& o, long instances) {
  return run_cases(
      o, "ode_consistency", 20, instances,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        // scalar closed form: log x(t) = ybar + e^{-t} (log x0 - ybar)
        {
          std::vector<SpdMatrix> atoms;
          std::vector<double> logs;
          for (int k = 0; k < 3; ++k) {
            const double u = rng.uniform(-1.0, 1.0);
            atoms.push_back(SpdMatrix::diagonal({std::exp(u)}));
            logs.push_back(u);
          }
          const FiniteMeasure mu = FiniteMeasure::uniform(atoms);
          const double ybar = (logs[0] + logs[1] + logs[2]) / 3.0;
          const double y0 = rng.uniform(-1.0, 1.0);
          const SpdMatrix x0 = SpdMatrix::diagonal({std::exp(y0)});
          const double exact = ybar + std::exp(-1.0) * (y0 - ybar);
          double prev_err = 0.0;
          for (const int n : {64, 128, 256}) {
            const SpdMatrix xe = euler_flow(1.0, n, mu, x0);
            const double err = std::abs(std::log(xe(0, 0)) - exact);
            if (n > 64) {
              const double ratio = prev_err / err;
              out.push_back({std::abs(ratio - 2.0), 0.0, 0.6});
            }
            prev_err = err;
          }
        }
        // matrix case: central difference of t -> S(t)X against the field
        {
          const FlowInstance fi =
              flow_instance(rng, o.dim_for(i), kFlowTargetC);
          const double h = 1e-3;
          const SolverConfig cfg = o.solver_config();
          const SpdMatrix sm = semigroup(1.0 - h, fi.mu, fi.x, o.flow_tol, cfg);
          const SpdMatrix s0 = semigroup(1.0, fi.mu, fi.x, o.flow_tol, cfg);
          const SpdMatrix sp = semigroup(1.0 + h, fi.mu, fi.x, o.flow_tol, cfg);
          const SymMatrix fd = (1.0 / (2.0 * h)) * (sp - sm);
          const SymMatrix field = karcher_residual(s0, fi.mu);
          out.push_back({spectral_norm(fd - field), 0.0,
                         std::max(1e-4, 10.0 * o.flow_tol / h)});
        }
      });
}

CheckResult check_entropy_lipschitz(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "entropy_lipschitz", 21, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const SpdMatrix a = random_spd(dim, 0.5, rng);
        const SpdMatrix x = random_spd(dim, 0.5, rng);
        const SpdMatrix y = random_spd(dim, 0.5, rng);
        const auto [lhs, rhs] = entropy_lipschitz_check(a, x, y);
        out.push_back({lhs, rhs, 1e-10});
      });
}

CheckResult check_perturbed_resolvent(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "perturbed_resolvent", 22, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const SpdMatrix x = random_spd(dim, 0.5, rng);
        const SpdMatrix y = point_near(x, rng.uniform(0.0, 0.2), rng);
        SymMatrix e = random_sym(dim, rng);
        const double m = std::max(spectral_norm(whitened(x, e)),
                                  spectral_norm(whitened(y, e)));
        e *= rng.uniform(0.0, 0.2) / std::max(m, 1e-12);
        const PerturbedResolventResult r = perturbed_resolvent_solve(x, y, e);
        out.push_back({r.dist, r.bound, 1e-9});
        // the construction solves X - Y + E = log_Y(Xhat) by definition
        out.push_back({spectral_norm(log_point(y, r.xhat) - (x - y + e)),
                       0.0, 1e-9});
      });
}

CheckResult check_truncation_coupling(const VerifyOptions& o, long runs) {
  return run_cases(
      o, "truncation_coupling", 23, runs,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const FiniteMeasure mu = random_measure(dim, 5, 0.5, rng, true);
        SolverConfig tight = o.solver_config();
        tight.residual_tol = 1e-12;
        const KarcherResult mean = karcher_mean(mu, tight);
        if (!mean.converged) {
          out.push_back({1.0, 0.0, 0.0});
          return;
        }
        double dmax = 0.0;
        for (int k = 0; k < mu.size(); ++k)
          dmax = std::max(dmax,
                          thompson_distance(mean.mean, mu.atom(k)));
        const double radius = 0.7 * dmax;  // some atoms replaced, some kept
        const long steps = 400;
        const CoupledTruncationRun run = coupled_truncation_run(
            mu, steps, rng.next(), radius, mean.mean);
        for (std::size_t n = 0; n < run.coupling_gap.size(); ++n) {
          out.push_back({run.coupling_gap[n], run.coupling_bound[n], 1e-10});
          // every truncated iterate stays within R of the center
          out.push_back({run.truncated.errors()[n], radius, 1e-10});
        }
      });
}

CheckResult check_varying_measure_chain(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "varying_measure_chain", 24, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        const FiniteMeasure mu = random_measure(dim, 4, 0.5, rng, true);
        const SpdMatrix x0 = random_spd(dim, 0.5, rng);
        const int l = (i % 2 == 0) ? 0 : 2;
        const int steps = 8;
        std::vector<FiniteMeasure> nus;
        SpdMatrix y0 = x0;
        switch (i % 3) {
          case 0:  // identical chains collapse to zero distance
            nus.assign(steps, mu);
            break;
          case 1:  // same measure, different starts
            nus.assign(steps, mu);
            y0 = random_spd(dim, 0.5, rng);
            break;
          default:  // empirical resamples of mu
            for (int s = 0; s < steps; ++s)
              nus.push_back(sample_empirical(mu, 5, rng.next()));
            y0 = random_spd(dim, 0.5, rng);
            break;
        }
        const auto [lhs, rhs] =
            varying_measure_chain_gap(mu, nus, l, x0, y0, o.solver_config());
        out.push_back({lhs, rhs, 1e-6});
      });
}

CheckResult check_sequence_envelopes(const VerifyOptions& o,
                                     long cases_per_alpha) {
  return run_cases(
      o, "sequence_envelopes", 25, cases_per_alpha,
      [&](SplitMix64& rng, long, std::vector<Margin>& out) {
        for (const double alpha : {0.5, 1.0, 2.0}) {
          const double beta = rng.uniform(0.1, 10.0);
          const double a0 = rng.uniform(0.0, 0.5 * beta);
          const EnvelopeCheckResult r =
              sequence_envelope_check(alpha, beta, a0, 100000);
          out.push_back({r.max_violation, 0.0, 1e-9});
        }
      });
}

CheckResult check_taylor_remainders(const VerifyOptions& o, long cases) {
  return run_cases(
      o, "taylor_remainders", 26, cases,
      [&](SplitMix64& rng, long i, std::vector<Margin>& out) {
        const int dim = o.dim_for(i);
        // general X for the exp bound
        SymMatrix x = random_sym(dim, rng);
        x *= rng.uniform(0.0, 1.5) / std::max(spectral_norm(x), 1e-12);
        const TaylorRemainderReport r1 = taylor_remainder_check(x);
        out.push_back({r1.exp_holds ? 0.0 : 1.0, 0.0, 0.0});
        // X near I for the log bound
        SymMatrix b = random_sym(dim, rng);
        b *= rng.uniform(0.0, 0.9) / std::max(spectral_norm(b), 1e-12);
        const TaylorRemainderReport r2 =
            taylor_remainder_check(SymMatrix::identity(dim) + b);
        out.push_back({r2.exp_holds ? 0.0 : 1.0, 0.0, 0.0});
        out.push_back({r2.log_applicable ? 0.0 : 1.0, 0.0, 0.0});
        out.push_back({r2.log_holds ? 0.0 : 1.0, 0.0, 0.0});
      });
}

CheckResult check_empirical_w1_decrease(const VerifyOptions& o, long seeds) {
  const auto t0 = Clock::now();
  seeds = std::max<long>(seeds, 20);  // below ~20 draws the mean trend is noise
  CheckResult c;
  c.name = "empirical_w1_decrease";
  SplitMix64 rng = substream(o.seed, 27, 0);
  const FiniteMeasure mu = random_measure(o.dims.front(), 4, 0.5, rng);
  const std::vector<int> sizes = {4, 16, 64};
  std::vector<double> avg(sizes.size(), 0.0);
  std::vector<std::uint64_t> draw_seeds(seeds);
  for (long s = 0; s < seeds; ++s) draw_seeds[s] = rng.next();
  std::vector<std::vector<double>> per_seed(seeds,
                                            std::vector<double>(sizes.size()));
  parallel_for(seeds, o.threads, [&](long s) {
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const FiniteMeasure emp =
          sample_empirical(mu, sizes[k], draw_seeds[s] + k);
      per_seed[s][k] = w1_distance(mu, emp).first;
    }
  });
  for (long s = 0; s < seeds; ++s)
    for (std::size_t k = 0; k < sizes.size(); ++k)
      avg[k] += per_seed[s][k] / static_cast<double>(seeds);
  for (std::size_t k = 1; k < sizes.size(); ++k)
    c.record(avg[k], avg[k - 1], 0.0);
  c.finish();
  c.millis = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return c;
}

RunReport run_verification(const VerifyOptions& o) {
  const auto t0 = Clock::now();
  RunReport report;
  auto push = [&report](CheckResult c) {
    std::fprintf(stderr, "  [verify] %-26s %s  (%.0f ms)\n", c.name.c_str(),
                 c.pass ? "pass" : "FAIL", c.millis);
    report.checks.push_back(std::move(c));
  };
  report.command = "verify";
  {
    std::string dims;
    for (std::size_t i = 0; i < o.dims.size(); ++i) {
      if (i) dims += ",";
      dims += std::to_string(o.dims[i]);
    }
    report.config = "dims=" + dims + " instances=" + std::to_string(o.instances) +
                    " seed=" + std::to_string(o.seed);
  }

  push(check_emi(o, o.scaled(1000)));
  push(check_order_sandwich(o, o.scaled(200)));
  push(check_metric_axioms(o, o.scaled(200)));
  push(check_invariance(o, o.scaled(200)));
  push(check_w1_metric(o, o.scaled(60)));
  push(check_w1_convexity(o, o.scaled(100)));
  push(check_lambda_contraction(o, o.scaled(200)));
  push(check_two_point_exactness(o, o.scaled(100)));
  push(check_resolvent_contraction(o, o.scaled(100)));
  push(check_resolvent_identity(o, o.scaled(100)));
  push(check_resolvent_bounds(o, o.scaled(100)));
  push(check_resolvent_asymptotics(o, o.scaled(100)));
  push(check_kobayashi(o, o.scaled(50)));
  push(check_two_scale(o, o.scaled(10)));
  push(check_semigroup_law(o, o.scaled(20)));
  push(check_flow_contraction(o, o.scaled(10)));
  push(check_stationarity(o, o.scaled(20)));
  push(check_mean_convergence(o, o.scaled(20)));
  push(check_time_lipschitz(o, o.scaled(5)));
  push(check_ode_consistency(o, o.scaled(3)));
  push(check_entropy_lipschitz(o, o.scaled(200)));
  push(check_perturbed_resolvent(o, o.scaled(100)));
  push(check_truncation_coupling(o, o.scaled(20)));
  push(check_varying_measure_chain(o, o.scaled(100)));
  push(check_sequence_envelopes(o, o.scaled(34)));
  push(check_taylor_remainders(o, o.scaled(100)));
  push(check_empirical_w1_decrease(o, o.scaled(50)));

  report.total_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return report;
}

}  // namespace karcher::harness
