#include "karcher/schemes.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "dense_ops.hpp"
#include "karcher/geometry.hpp"
#include "karcher/rng.hpp"

namespace karcher {

namespace {

bool retained_index(long n, long cycle) {
  if (cycle > 0 && n % cycle == 0) return true;
  return (n & (n - 1)) == 0;  // powers of two
}

// Inductive-mean walk over a fixed atom schedule; shared by all schemes.
// pick(step) returns the 0-based atom index used to form S_{step+1}.
template <class Pick>
IterationTrace inductive_walk(const FiniteMeasure& mu, long n_steps,
                              const SpdMatrix& reference, long cycle,
                              Pick&& pick) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto elapsed_ns = [&t0]() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() -
                                                                t0)
        .count();
  };
  const detail::Frame fref = detail::make_frame(reference);
  IterationTrace trace;
  trace.meta().measure_digest = measure_digest(mu);

  SpdMatrix s = mu.atom(pick(0));
  trace.append(1, detail::thompson_from_frame(fref, s), elapsed_ns());
  trace.retain(1, s);
  for (long n = 1; n < n_steps; ++n) {
    s = geodesic(s, mu.atom(pick(n)), 1.0 / static_cast<double>(n + 1));
    trace.append(n + 1, detail::thompson_from_frame(fref, s), elapsed_ns());
    if (retained_index(n + 1, cycle)) trace.retain(n + 1, s);
  }
  return trace;
}

}  // namespace

void SchemeSpec::validate() const {
  if (n_steps < 1) throw std::invalid_argument("scheme needs n_steps >= 1");
  if (kind == SchemeKind::truncated_stochastic) {
    if (!(radius > 0.0))
      throw std::invalid_argument("truncated scheme needs radius > 0");
  } else if (radius != 0.0) {
    throw std::invalid_argument("radius is only meaningful for the truncated scheme");
  }
}

IterationTrace nodice_sequence(const FiniteMeasure& mu, long n_cycles,
                               const SpdMatrix& reference) {
  if (n_cycles < 1) throw std::invalid_argument("n_cycles must be >= 1");
  if (mu.dim() != reference.dim())
    throw std::invalid_argument("dimension mismatch");
  const long k = mu.size();
  for (int i = 0; i < mu.size(); ++i)
    if (std::abs(mu.weight(i) * static_cast<double>(k) - 1.0) > 1e-9)
      throw std::invalid_argument("nodice requires equal weights 1/k");

  IterationTrace trace = inductive_walk(
      mu, n_cycles * k, reference, k,
      [k](long step) { return static_cast<int>(step % k); });
  trace.meta().scheme = "nodice";
  return trace;
}

IterationTrace stochastic_sequence(const FiniteMeasure& mu, long n_steps,
                                   std::uint64_t seed,
                                   const SpdMatrix& reference) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (mu.dim() != reference.dim())
    throw std::invalid_argument("dimension mismatch");
  SplitMix64 rng(seed);
  IterationTrace trace = inductive_walk(
      mu, n_steps, reference, 0,
      [&](long) { return rng.pick(mu.cumulative_weights()); });
  trace.meta().scheme = "slln";
  trace.meta().seed = seed;
  return trace;
}

IterationTrace truncated_sequence(const FiniteMeasure& mu, long n_steps,
                                  std::uint64_t seed, double radius,
                                  const SpdMatrix& center) {
  CoupledTruncationRun run =
      coupled_truncation_run(mu, n_steps, seed, radius, center);
  return std::move(run.truncated);
}

CoupledTruncationRun coupled_truncation_run(const FiniteMeasure& mu,
                                            long n_steps, std::uint64_t seed,
                                            double radius,
                                            const SpdMatrix& center) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (mu.dim() != center.dim())
    throw std::invalid_argument("dimension mismatch");

  // Per-atom truncation map and displacement, computed once.
  const detail::Frame fc = detail::make_frame(center);
  std::vector<bool> replaced(mu.size());
  std::vector<double> displacement(mu.size());
  for (int i = 0; i < mu.size(); ++i) {
    const double d = detail::thompson_from_frame(fc, mu.atom(i));
    replaced[i] = d >= radius;
    displacement[i] = replaced[i] ? d : 0.0;
  }

  CoupledTruncationRun run;
  run.plain.meta().scheme = "slln";
  run.truncated.meta().scheme = "slln-truncated";
  run.plain.meta().seed = run.truncated.meta().seed = seed;
  run.plain.meta().measure_digest = run.truncated.meta().measure_digest =
      measure_digest(mu);

  // Both paths consume the identical seed-indexed draw stream.
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  SplitMix64 rng(seed);
  SpdMatrix s, sr;
  double bound_sum = 0.0;
  for (long n = 1; n <= n_steps; ++n) {
    const int idx = rng.pick(mu.cumulative_weights());
    const SpdMatrix& y = mu.atom(idx);
    const SpdMatrix& yr = replaced[idx] ? center : mu.atom(idx);
    if (n == 1) {
      s = y;
      sr = yr;
    } else {
      const double t = 1.0 / static_cast<double>(n);
      s = geodesic(s, y, t);
      sr = geodesic(sr, yr, t);
    }
    bound_sum += displacement[idx];
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                        Clock::now() - t0)
                        .count();
    run.plain.append(n, detail::thompson_from_frame(fc, s), ns);
    run.truncated.append(n, detail::thompson_from_frame(fc, sr), ns);
    run.coupling_gap.push_back(thompson_distance(s, sr));
    run.coupling_bound.push_back(bound_sum / static_cast<double>(n));
    if (retained_index(n, 0)) {
      run.plain.retain(n, s);
      run.truncated.retain(n, sr);
    }
  }
  return run;
}

std::pair<double, double> varying_measure_chain_gap(
    const FiniteMeasure& mu, const std::vector<FiniteMeasure>& nus,
    int l_offset, const SpdMatrix& x0, const SpdMatrix& y0,
    const SolverConfig& cfg) {
  if (nus.empty()) throw std::invalid_argument("need at least one nu");
  if (l_offset < 0) throw std::invalid_argument("l_offset must be >= 0");
  if (x0.dim() != mu.dim() || y0.dim() != mu.dim())
    throw std::invalid_argument("dimension mismatch");
  for (const FiniteMeasure& nu : nus)
    if (nu.dim() != mu.dim()) throw std::invalid_argument("dimension mismatch");

  const long k = static_cast<long>(nus.size());
  const double step_tol =
      std::max(cfg.residual_tol / static_cast<double>(k), 1e-14);

  SpdMatrix x = x0, y = y0;
  double w1_sum = 0.0;
  for (long i = 0; i < k; ++i) {
    const double lambda = 1.0 / static_cast<double>(l_offset + i + 1);
    x = internal::resolvent_step(lambda, mu, x, cfg, step_tol);
    y = internal::resolvent_step(lambda, nus[i], y, cfg, step_tol);
    w1_sum += w1_distance(mu, nus[i]).first;
  }
  const double lhs = thompson_distance(x, y);
  const double denom = static_cast<double>(k + l_offset + 1);
  const double rhs =
      (l_offset + 1) / denom * thompson_distance(x0, y0) + w1_sum / denom;
  return {lhs, rhs};
}

std::pair<double, double> entropy_lipschitz_check(const SpdMatrix& a,
                                                  const SpdMatrix& x,
                                                  const SpdMatrix& y) {
  if (a.dim() != x.dim() || a.dim() != y.dim())
    throw std::invalid_argument("dimension mismatch");
  const double lhs = spectral_norm(log_point(x, a) - log_point(y, a));
  const double dxy = thompson_distance(x, y);
  const double dxa = thompson_distance(x, a);
  const double dix = spectral_norm(spd_log(x));
  const double diy = spectral_norm(spd_log(y));
  const double dia = spectral_norm(spd_log(a));
  const double rhs = dxa * std::exp(2.0 * dix) * (std::exp(dxy) - 1.0) +
                     std::exp(diy + dia) * dxy;
  return {lhs, rhs};
}

PerturbedResolventResult perturbed_resolvent_solve(const SpdMatrix& x,
                                                   const SpdMatrix& y,
                                                   const SymMatrix& e) {
  if (x.dim() != y.dim() || x.dim() != e.dim())
    throw std::invalid_argument("dimension mismatch");
  const double dxy = thompson_distance(x, y);
  const detail::Frame fx = detail::make_frame(x);
  const detail::Frame fy = detail::make_frame(y);
  const double ex = detail::raw_spectral_norm(
      x.dim(), detail::congruence(x.dim(), fx.inv_sqrt, e.entries()));
  const double ey = detail::raw_spectral_norm(
      x.dim(), detail::congruence(x.dim(), fy.inv_sqrt, e.entries()));
  if (!(dxy < 0.3 && ex < 0.3 && ey < 0.3))
    throw std::invalid_argument(
        "perturbed_resolvent_solve: inputs too large for the series bounds "
        "(need d(X,Y), normalized norms of E all < 0.3)");

  PerturbedResolventResult out;
  out.xhat = exp_point(y, x - y + e);
  out.dist = thompson_distance(out.xhat, x);

  const double m = (std::exp(dxy) - 1.0) + ey;
  const double u = ex + std::exp(dxy) * m * m * std::exp(m) / 2.0;
  out.bound = u + u * u / (2.0 * (1.0 - u));
  return out;
}

EnvelopeCheckResult sequence_envelope_check(double alpha, double beta,
                                            double a0, long k_max, long k_min,
                                            double slack) {
  if (!(alpha > 0.0) || !(beta > 0.0) || a0 < 0.0)
    throw std::invalid_argument("need alpha > 0, beta > 0, a0 >= 0");
  if (k_min < 0 || k_max < k_min)
    throw std::invalid_argument("need 0 <= k_min <= k_max");

  auto envelope = [&](long k) {
    const double kk = static_cast<double>(k);
    if (alpha < 1.0)
      return (a0 + std::pow(2.0, alpha) * beta * (2.0 - alpha) / (1.0 - alpha)) /
             std::pow(kk + 2.0, alpha);
    if (alpha == 1.0) return beta * (1.0 + std::log(kk + 1.0)) / (kk + 1.0);
    return (beta + ((alpha - 1.0) * a0 - beta) / std::pow(kk + 2.0, alpha - 1.0)) /
           ((alpha - 1.0) * (kk + 2.0));
  };

  EnvelopeCheckResult res;
  double a = a0;
  for (long k = 0; k <= k_max; ++k) {
    if (k >= k_min) {
      const double violation = a - envelope(k);
      if (violation > res.max_violation) res.max_violation = violation;
      if (violation > slack) res.holds = false;
    }
    const double next =
        (1.0 - alpha / static_cast<double>(k + 1)) * a +
        beta / (static_cast<double>(k + 1) * static_cast<double>(k + 1));
    a = std::max(0.0, next);
  }
  return res;
}

}  // namespace karcher
