#pragma once

#include <cstdint>
#include <vector>

#include "harness/report.hpp"
#include "karcher/solver.hpp"

namespace karcher::harness {

struct VerifyOptions {
  std::vector<int> dims = {2, 3, 4};
  int instances = 50;   // scales the per-check case counts (50 = reference)
  std::uint64_t seed = 1;
  int threads = 0;      // 0 = KARCHER_THREADS or hardware concurrency
  double residual_tol = 1e-10;
  double flow_tol = 1e-4;
  bool inject_violation = false;  // harness self-test: forces one failure

  SolverConfig solver_config() const {
    SolverConfig cfg;
    cfg.residual_tol = residual_tol;
    return cfg;
  }
  int dim_for(std::uint64_t i) const {
    return dims[static_cast<std::size_t>(i % dims.size())];
  }
  long scaled(long reference_count) const {
    const long n = (reference_count * instances + 49) / 50;
    return n < 1 ? 1 : n;
  }
};

// Individual inequality families. Counts are explicit so the acceptance
// suite can pin its own case numbers onto the same implementations.
CheckResult check_emi(const VerifyOptions& o, long pairs);
CheckResult check_order_sandwich(const VerifyOptions& o, long cases);
CheckResult check_metric_axioms(const VerifyOptions& o, long triples);
CheckResult check_invariance(const VerifyOptions& o, long cases);
CheckResult check_w1_metric(const VerifyOptions& o, long cases);
CheckResult check_w1_convexity(const VerifyOptions& o, long cases);
CheckResult check_lambda_contraction(const VerifyOptions& o, long pairs);
CheckResult check_two_point_exactness(const VerifyOptions& o, long cases);
CheckResult check_resolvent_contraction(const VerifyOptions& o, long cases);
CheckResult check_resolvent_identity(const VerifyOptions& o, long cases);
CheckResult check_resolvent_bounds(const VerifyOptions& o, long cases);
CheckResult check_resolvent_asymptotics(const VerifyOptions& o, long cases);
CheckResult check_kobayashi(const VerifyOptions& o, long grid_pairs);
CheckResult check_two_scale(const VerifyOptions& o, long instances);
CheckResult check_semigroup_law(const VerifyOptions& o, long instances);
CheckResult check_flow_contraction(const VerifyOptions& o, long instances);
CheckResult check_stationarity(const VerifyOptions& o, long instances);
CheckResult check_mean_convergence(const VerifyOptions& o, long instances);
CheckResult check_time_lipschitz(const VerifyOptions& o, long instances);
CheckResult check_ode_consistency(const VerifyOptions& o, long instances);
CheckResult check_entropy_lipschitz(const VerifyOptions& o, long cases);
CheckResult check_perturbed_resolvent(const VerifyOptions& o, long cases);
CheckResult check_truncation_coupling(const VerifyOptions& o, long runs);
CheckResult check_varying_measure_chain(const VerifyOptions& o, long cases);
CheckResult check_sequence_envelopes(const VerifyOptions& o,
                                     long cases_per_alpha);
CheckResult check_taylor_remainders(const VerifyOptions& o, long cases);
CheckResult check_empirical_w1_decrease(const VerifyOptions& o, long seeds);

/// The full battery behind `karcher verify`.
RunReport run_verification(const VerifyOptions& o);

}  // namespace karcher::harness
