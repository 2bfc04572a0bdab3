#include "karcher/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dense_ops.hpp"
#include "karcher/geometry.hpp"

namespace karcher {

namespace {

constexpr long kMaxResolventCalls = 10000000;
// residual_tol / chain-length would dip below what double precision can
// certify; 1e-13 on the normalized residual is reliably reachable at the
// dimensions in scope and keeps accumulated chain error far below every
// downstream slack.
constexpr double kMinStepTol = 1e-13;

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.residual_tol > 0.0))
    throw std::invalid_argument("residual_tol must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(cfg.min_damping > 0.0 && cfg.min_damping <= cfg.damping &&
        cfg.damping <= 1.0))
    throw std::invalid_argument("need 0 < min_damping <= damping <= 1");
}

void check_dims(const SpdMatrix& x, const FiniteMeasure& mu) {
  if (x.dim() != mu.dim()) throw std::invalid_argument("dimension mismatch");
}

double chain_step_tol(const SolverConfig& cfg, long chain_length) {
  return std::max(cfg.residual_tol / static_cast<double>(chain_length),
                  kMinStepTol);
}

using detail::Vec;

// ---------------------------------------------------------------------------
// Allocation-free small-matrix kernels over caller-owned buffers. Resolvent
// chains run these millions of times, so no wrappers and no heap traffic.

void raw_mul(int n, const double* a, const double* b, double* out) {
  for (int i = 0; i < n; ++i) {
    double* orow = out + i * n;
    for (int j = 0; j < n; ++j) orow[j] = 0.0;
    for (int k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      const double* brow = b + k * n;
      for (int j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  }
}

void raw_symmetrize(int n, double* m) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m[i * n + j] + m[j * n + i]);
      m[i * n + j] = v;
      m[j * n + i] = v;
    }
}

// out = w * b * w (w symmetric), symmetrized; tmp is n*n scratch.
void raw_congruence(int n, const double* w, const double* b, double* tmp,
                    double* out) {
  raw_mul(n, w, b, tmp);
  raw_mul(n, tmp, w, out);
  raw_symmetrize(n, out);
}

// out = q diag(vals) q^T, symmetrized; tmp is n*n scratch.
void raw_assemble(int n, const double* q, const double* vals, double* tmp,
                  double* out) {
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) tmp[i * n + k] = q[i * n + k] * vals[k];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += tmp[i * n + k] * q[j * n + k];
      out[i * n + j] = s;
    }
  raw_symmetrize(n, out);
}

double raw_off_norm(int n, const double* a) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

// Cyclic Jacobi; `a` is destroyed. Mirrors sym_eigen (100 sweeps,
// threshold 1e-14 ||M||_F) without allocating or sorting.
bool raw_jacobi(int n, double* a, double* vals, double* q) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q[i * n + j] = (i == j) ? 1.0 : 0.0;
  if (n == 1) {
    vals[0] = a[0];
    return true;
  }
  double fro = 0.0;
  for (int i = 0; i < n * n; ++i) fro += a[i] * a[i];
  const double conv = 1e-14 * std::sqrt(fro);

  bool converged = false;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (raw_off_norm(n, a) <= conv) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p)
      for (int r = p + 1; r < n; ++r) {
        const double apq = a[p * n + r];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[r * n + r];
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a[p * n + p] = app - t * apq;
        a[r * n + r] = aqq + t * apq;
        a[p * n + r] = 0.0;
        a[r * n + p] = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == r) continue;
          const double akp = a[k * n + p];
          const double akq = a[k * n + r];
          a[k * n + p] = akp - s * (akq + tau * akp);
          a[p * n + k] = a[k * n + p];
          a[k * n + r] = akq + s * (akp - tau * akq);
          a[r * n + k] = a[k * n + r];
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = q[k * n + p];
          const double vkq = q[k * n + r];
          q[k * n + p] = vkp - s * (vkq + tau * vkp);
          q[k * n + r] = vkq + s * (vkp - tau * vkq);
        }
      }
  }
  if (!converged && raw_off_norm(n, a) > conv) return false;
  for (int i = 0; i < n; ++i) vals[i] = a[i * n + i];
  return true;
}

// ---------------------------------------------------------------------------
// Damped fixed-point engine over a fixed atom list with mutable weights.
// Slot k (when present) is the delta-atom a resolvent blend points at.

struct EngineState {
  Vec x, sqrt, isqrt, w, wq;
  Vec wvals;
  double rnorm = 0.0;

  void resize(int n) {
    x.resize(n * n);
    sqrt.resize(n * n);
    isqrt.resize(n * n);
    w.resize(n * n);
    wq.resize(n * n);
    wvals.resize(n);
  }
};

class FixedPointEngine {
 public:
  FixedPointEngine(int n, std::size_t atom_count) : n_(n) {
    atoms_.assign(atom_count, Vec(n * n, 0.0));
    weights_.assign(atom_count, 0.0);
    s1_.resize(n * n);
    s2_.resize(n * n);
    s3_.resize(n * n);
    avals_.resize(n);
    aq_.resize(n * n);
    cur_.resize(n);
    trial_.resize(n);
  }

  void set_atom(std::size_t i, const std::vector<double>& entries) {
    atoms_[i] = entries;
  }
  void set_weight(std::size_t i, double w) { weights_[i] = w; }
  Vec& atom_slot(std::size_t i) { return atoms_[i]; }

  struct Outcome {
    double rnorm = 0.0;
    int iterations = 0;
    bool converged = false;
  };

  // Damped fixed-point iteration from `x`; on return `x` holds the final
  // point (also when not converged).
  Outcome run(Vec& x, const SolverConfig& cfg, double tol) {
    if (!eval(x, cur_))
      throw std::domain_error("karcher solve: initial point is degenerate");
    Outcome out;
    while (cur_.rnorm > tol && out.iterations < cfg.max_iters) {
      double alpha = cfg.damping;
      while (true) {
        make_step(cur_, alpha, s3_);
        const bool ok = eval(s3_, trial_);
        // sufficient decrease, not mere decrease: the full step can orbit a
        // wide configuration with the residual shrinking by only 1e-3 per
        // round, which a plain r' < r test never escapes
        if (ok && trial_.rnorm <= cur_.rnorm * (1.0 - 0.125 * alpha)) break;
        if (alpha <= cfg.min_damping * (1.0 + 1e-12)) {
          if (ok) break;  // floor step accepted; damping resets next round
          out.rnorm = cur_.rnorm;
          out.converged = false;
          x = cur_.x;
          return out;
        }
        alpha = std::max(0.5 * alpha, cfg.min_damping);
      }
      std::swap(cur_, trial_);
      ++out.iterations;
    }
    out.rnorm = cur_.rnorm;
    out.converged = cur_.rnorm <= tol;
    x = cur_.x;
    return out;
  }

 private:
  // Whitened residual and frames at `x`; false if outside the cone.
  bool eval(const Vec& x, EngineState& st) {
    const int n = n_;
    st.x = x;
    s1_ = x;
    if (!raw_jacobi(n, s1_.data(), avals_.data(), aq_.data())) return false;
    double lo = avals_[0], hi = avals_[0];
    for (int k = 1; k < n; ++k) {
      lo = std::min(lo, avals_[k]);
      hi = std::max(hi, avals_[k]);
    }
    if (!(lo > 1e-13 * (1.0 + hi))) return false;
    for (int k = 0; k < n; ++k) s2_[k] = std::sqrt(avals_[k]);
    raw_assemble(n, aq_.data(), s2_.data(), s1_.data(), st.sqrt.data());
    for (int k = 0; k < n; ++k) s2_[k] = 1.0 / s2_[k];
    raw_assemble(n, aq_.data(), s2_.data(), s1_.data(), st.isqrt.data());

    std::fill(st.w.begin(), st.w.end(), 0.0);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (weights_[i] == 0.0) continue;
      raw_congruence(n, st.isqrt.data(), atoms_[i].data(), s1_.data(), s2_.data());
      if (!raw_jacobi(n, s2_.data(), avals_.data(), aq_.data())) return false;
      for (int k = 0; k < n; ++k) {
        if (!(avals_[k] > 0.0)) return false;
        avals_[k] = std::log(avals_[k]);
      }
      raw_assemble(n, aq_.data(), avals_.data(), s1_.data(), s2_.data());
      const double wi = weights_[i];
      for (int k = 0; k < n * n; ++k) st.w[k] += wi * s2_[k];
    }
    s1_ = st.w;
    if (!raw_jacobi(n, s1_.data(), st.wvals.data(), st.wq.data())) return false;
    st.rnorm = 0.0;
    for (int k = 0; k < n; ++k)
      st.rnorm = std::max(st.rnorm, std::abs(st.wvals[k]));
    return true;
  }

  // out = X^{1/2} exp(alpha W) X^{1/2} from the state's spectral data.
  void make_step(const EngineState& st, double alpha, Vec& out) {
    const int n = n_;
    for (int k = 0; k < n; ++k) avals_[k] = std::exp(alpha * st.wvals[k]);
    raw_assemble(n, st.wq.data(), avals_.data(), s1_.data(), s2_.data());
    raw_congruence(n, st.sqrt.data(), s2_.data(), s1_.data(), out.data());
  }

  int n_;
  std::vector<Vec> atoms_;
  std::vector<double> weights_;
  Vec s1_, s2_, s3_, aq_;
  std::vector<double> avals_;
  EngineState cur_, trial_;
};

// Engine preloaded with mu's atoms; solves plain Karcher means.
FixedPointEngine make_measure_engine(const FiniteMeasure& mu) {
  FixedPointEngine eng(mu.dim(), mu.size());
  for (int i = 0; i < mu.size(); ++i) {
    eng.set_atom(i, mu.atom(i).entries());
    eng.set_weight(i, mu.weight(i));
  }
  return eng;
}

KarcherResult run_engine(FixedPointEngine& eng, const SolverConfig& cfg,
                         double tol, const SpdMatrix& initial) {
  Vec x = initial.entries();
  const FixedPointEngine::Outcome o = eng.run(x, cfg, tol);
  KarcherResult res;
  res.mean = SpdMatrix(initial.dim(), x);
  res.residual_norm = o.rnorm;
  res.iterations = o.iterations;
  res.converged = o.converged;
  return res;
}

// Resolvent chains: engine over mu's atoms plus the delta slot; the slot and
// the weights are updated in place between steps.
class ResolventChain {
 public:
  ResolventChain(const FiniteMeasure& mu, const SpdMatrix& x0,
                 const SolverConfig& cfg)
      : n_(mu.dim()), cfg_(cfg), eng_(mu.dim(), mu.size() + 1),
        mu_weights_(mu.weights()), x_(x0.entries()) {
    for (int i = 0; i < mu.size(); ++i) eng_.set_atom(i, mu.atom(i).entries());
  }

  void step(double lambda, double tol) {
    const double s = lambda / (1.0 + lambda);
    for (std::size_t i = 0; i < mu_weights_.size(); ++i)
      eng_.set_weight(i, s * mu_weights_[i]);
    eng_.set_weight(mu_weights_.size(), 1.0 / (1.0 + lambda));
    eng_.atom_slot(mu_weights_.size()) = x_;
    const FixedPointEngine::Outcome o = eng_.run(x_, cfg_, tol);
    if (!o.converged)
      throw std::runtime_error(
          "resolvent: inner Karcher solve did not converge");
  }

  SpdMatrix current() const { return SpdMatrix(n_, x_); }

 private:
  int n_;
  SolverConfig cfg_;
  FixedPointEngine eng_;
  std::vector<double> mu_weights_;
  Vec x_;
};

}  // namespace

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.empty()) throw std::invalid_argument("time grid must be nonempty");
  double prev = 0.0;
  for (double t : times_) {
    if (!(t > prev))
      throw std::invalid_argument("times must be strictly increasing and positive");
    prev = t;
  }
}

TimeGrid TimeGrid::uniform(double horizon, int steps) {
  if (!(horizon > 0.0) || steps < 1)
    throw std::invalid_argument("uniform grid needs horizon > 0 and steps >= 1");
  std::vector<double> t(steps);
  for (int i = 0; i < steps; ++i)
    t[i] = horizon * static_cast<double>(i + 1) / steps;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::harmonic(int steps, int offset) {
  if (steps < 1 || offset < 0)
    throw std::invalid_argument("harmonic grid needs steps >= 1, offset >= 0");
  std::vector<double> t(steps);
  double run = 0.0;
  for (int i = 0; i < steps; ++i) {
    run += 1.0 / static_cast<double>(offset + i + 1);
    t[i] = run;
  }
  return TimeGrid(std::move(t));
}

double TimeGrid::step(int i) const {
  return i == 0 ? times_[0] : times_[i] - times_[i - 1];
}

double TimeGrid::sum_squared_steps() const {
  double s = 0.0;
  for (int i = 0; i < steps(); ++i) s += step(i) * step(i);
  return s;
}

SymMatrix karcher_residual(const SpdMatrix& x, const FiniteMeasure& mu) {
  check_dims(x, mu);
  const detail::Frame fx = detail::make_frame(x);
  detail::Vec acc(static_cast<std::size_t>(x.dim()) * x.dim(), 0.0);
  for (int i = 0; i < mu.size(); ++i) {
    const detail::Vec m =
        detail::congruence(x.dim(), fx.inv_sqrt, mu.atom(i).entries());
    const EigenDecomposition em = sym_eigen(SymMatrix(x.dim(), m));
    if (!(em.min_eigenvalue() > 0.0))
      throw std::domain_error("karcher_residual: whitened atom not positive");
    std::vector<double> vals(em.dim);
    for (int k = 0; k < em.dim; ++k) vals[k] = std::log(em.eigenvalues[k]);
    const detail::Vec lg = detail::eig_assemble(em, vals);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += mu.weight(i) * lg[k];
  }
  return SymMatrix(x.dim(),
                   detail::congruence(x.dim(), fx.sqrt, acc));
}

double normalized_residual_norm(const SpdMatrix& x, const FiniteMeasure& mu) {
  check_dims(x, mu);
  const detail::Frame fx = detail::make_frame(x);
  const detail::Vec v = detail::congruence(
      x.dim(), fx.inv_sqrt,
      karcher_residual(x, mu).entries());
  return detail::raw_spectral_norm(x.dim(), v);
}

double mean_distance(const SpdMatrix& x, const FiniteMeasure& mu) {
  check_dims(x, mu);
  const detail::Frame fx = detail::make_frame(x);
  double c = 0.0;
  for (int i = 0; i < mu.size(); ++i)
    c += mu.weight(i) * detail::thompson_from_frame(fx, mu.atom(i));
  return c;
}

SpdMatrix log_euclidean_mean(const FiniteMeasure& mu) {
  SymMatrix acc(mu.dim());
  for (int i = 0; i < mu.size(); ++i)
    acc += mu.weight(i) * spd_log(mu.atom(i));
  return spd_exp(acc);
}

KarcherResult karcher_mean(const FiniteMeasure& mu, const SolverConfig& cfg) {
  return karcher_mean_from(mu, cfg, log_euclidean_mean(mu));
}

KarcherResult karcher_mean_from(const FiniteMeasure& mu, const SolverConfig& cfg,
                                const SpdMatrix& initial) {
  validate_config(cfg);
  check_dims(initial, mu);
  FixedPointEngine eng = make_measure_engine(mu);
  return run_engine(eng, cfg, cfg.residual_tol, initial);
}

namespace internal {

SpdMatrix resolvent_step(double lambda, const FiniteMeasure& mu,
                         const SpdMatrix& x, const SolverConfig& cfg,
                         double step_tol) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  check_dims(x, mu);
  ResolventChain chain(mu, x, cfg);
  chain.step(lambda, step_tol);
  return chain.current();
}

}  // namespace internal

SpdMatrix resolvent(double lambda, const FiniteMeasure& mu, const SpdMatrix& x,
                    const SolverConfig& cfg) {
  validate_config(cfg);
  return internal::resolvent_step(lambda, mu, x, cfg, cfg.residual_tol);
}

double resolvent_identity_gap(double tau, double lambda, const FiniteMeasure& mu,
                              const SpdMatrix& x, const SolverConfig& cfg) {
  if (!(tau > lambda && lambda > 0.0))
    throw std::invalid_argument("need tau > lambda > 0");
  validate_config(cfg);
  const SpdMatrix jt = internal::resolvent_step(tau, mu, x, cfg, cfg.residual_tol);
  const SpdMatrix mid = geodesic(jt, x, lambda / tau);
  const SpdMatrix rhs =
      internal::resolvent_step(lambda, mu, mid, cfg, cfg.residual_tol);
  return thompson_distance(jt, rhs);
}

bool resolvent_bound_check(const std::vector<double>& lambdas,
                           const FiniteMeasure& mu, const SpdMatrix& x,
                           const SolverConfig& cfg) {
  constexpr double kSlack = 1e-8;
  validate_config(cfg);
  if (lambdas.empty()) return true;
  const double c = mean_distance(x, mu);
  const double step_tol = chain_step_tol(cfg, static_cast<long>(lambdas.size()));

  ResolventChain chain(mu, x, cfg);
  double chain_budget = 0.0;
  for (double lambda : lambdas) {
    const SpdMatrix j = internal::resolvent_step(lambda, mu, x, cfg, step_tol);
    if (thompson_distance(j, x) > lambda / (1.0 + lambda) * c + kSlack)
      return false;
    chain.step(lambda, step_tol);
    chain_budget += lambda / (1.0 + lambda) * c;
  }
  return thompson_distance(chain.current(), x) <= chain_budget + kSlack;
}

SpdMatrix semigroup(double t, const FiniteMeasure& mu, const SpdMatrix& x,
                    double flow_tol, const SolverConfig& cfg) {
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
  if (!(flow_tol > 0.0)) throw std::invalid_argument("flow_tol must be positive");
  validate_config(cfg);
  check_dims(x, mu);
  if (t == 0.0) return x;

  const double c = mean_distance(x, mu);
  if (c == 0.0) return x;

  const double n_real = std::ceil(2.0 * (t * c / flow_tol) * (t * c / flow_tol));
  if (!(n_real <= static_cast<double>(kMaxResolventCalls))) {
    const double achievable =
        t * c * std::sqrt(2.0 / static_cast<double>(kMaxResolventCalls));
    throw std::runtime_error(
        "semigroup: resolvent-call cap (1e7) exceeded; achievable flow_tol "
        "for this input is about " +
        std::to_string(achievable));
  }
  const long n = std::max(1L, static_cast<long>(n_real));
  const double lambda = t / static_cast<double>(n);
  const double step_tol = chain_step_tol(cfg, n);

  ResolventChain chain(mu, x, cfg);
  for (long i = 0; i < n; ++i) chain.step(lambda, step_tol);
  return chain.current();
}

std::pair<double, double> kobayashi_gap(const TimeGrid& grid1,
                                        const TimeGrid& grid2,
                                        const FiniteMeasure& mu,
                                        const SpdMatrix& x,
                                        const SolverConfig& cfg) {
  validate_config(cfg);
  check_dims(x, mu);

  auto run_chain = [&](const TimeGrid& g) {
    const double step_tol = chain_step_tol(cfg, g.steps());
    ResolventChain chain(mu, x, cfg);
    for (int i = 0; i < g.steps(); ++i) chain.step(g.step(i), step_tol);
    return chain.current();
  };
  const SpdMatrix xm = run_chain(grid1);
  const SpdMatrix xn = run_chain(grid2);
  const double lhs = thompson_distance(xm, xn);

  double prefactor = 1.0;
  const int overlap = std::min(grid1.steps(), grid2.steps());
  for (int j = 0; j < overlap; ++j)
    prefactor /= 1.0 + std::min(grid1.step(j), grid2.step(j));
  const double mismatch = grid1.horizon() - grid2.horizon();
  const double rhs = prefactor *
                     std::sqrt(mismatch * mismatch + grid1.sum_squared_steps() +
                               grid2.sum_squared_steps()) *
                     mean_distance(x, mu);
  return {lhs, rhs};
}

IterationTrace proximal_sequence(const FiniteMeasure& mu, const SpdMatrix& x0,
                                 int d_offset, int n_steps,
                                 const SolverConfig& cfg) {
  if (d_offset < 0) throw std::invalid_argument("d_offset must be >= 0");
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  validate_config(cfg);
  check_dims(x0, mu);

  SolverConfig ref_cfg = cfg;
  ref_cfg.residual_tol = 1e-12;
  ref_cfg.max_iters = std::max(cfg.max_iters, 1000);
  const KarcherResult ref = karcher_mean(mu, ref_cfg);
  if (!ref.converged)
    throw std::runtime_error("proximal_sequence: reference mean did not converge");
  const detail::Frame fref = detail::make_frame(ref.mean);

  IterationTrace trace;
  trace.meta().scheme = "proximal";
  trace.meta().measure_digest = measure_digest(mu);

  const double step_tol = chain_step_tol(cfg, n_steps);
  ResolventChain chain(mu, x0, cfg);
  trace.append(0, detail::thompson_from_frame(fref, x0));
  trace.retain(0, x0);
  for (int k = 1; k <= n_steps; ++k) {
    const double lambda = 1.0 / static_cast<double>(k + d_offset);
    try {
      chain.step(lambda, step_tol);
    } catch (const std::runtime_error& e) {
      trace.mark_aborted(e.what());
      break;
    }
    const SpdMatrix xk = chain.current();
    trace.append(k, detail::thompson_from_frame(fref, xk));
    if ((k & (k - 1)) == 0 || k == n_steps) trace.retain(k, xk);
  }
  return trace;
}

SpdMatrix euler_flow(double t_end, int n_steps, const FiniteMeasure& mu,
                     const SpdMatrix& x0) {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  check_dims(x0, mu);
  const double h = t_end / static_cast<double>(n_steps);

  SpdMatrix x = x0;
  for (int i = 0; i < n_steps; ++i) x = exp_point(x, h * karcher_residual(x, mu));
  return x;
}

bool resolvent_asymptotics_check(double lambda, const FiniteMeasure& mu,
                                 const SpdMatrix& x, const SolverConfig& cfg) {
  validate_config(cfg);
  check_dims(x, mu);
  const double c = mean_distance(x, mu);
  if (!(lambda > 0.0) || !(lambda < std::log(2.0) / c))
    throw std::invalid_argument("need 0 < lambda < log(2)/C(X)");

  SolverConfig tight = cfg;
  tight.residual_tol = std::min(cfg.residual_tol, 1e-12);
  const SpdMatrix j =
      internal::resolvent_step(lambda, mu, x, tight, tight.residual_tol);

  // In the frame of J both sides whiten: lhs = ||log(Y) - (Y - I)|| with
  // Y = J^{-1/2} X J^{-1/2}.
  const detail::Frame fj = detail::make_frame(j);
  const SymMatrix y(x.dim(),
                    detail::congruence(x.dim(), fj.inv_sqrt, x.entries()));
  const EigenDecomposition ey = sym_eigen(y);
  std::vector<double> vals(ey.dim);
  for (int k = 0; k < ey.dim; ++k) {
    if (!(ey.eigenvalues[k] > 0.0))
      throw std::domain_error("whitened point must stay positive definite");
    vals[k] = std::log(ey.eigenvalues[k]);
  }
  const SymMatrix log_y(x.dim(), detail::eig_assemble(ey, vals));
  const double lhs = spectral_norm(log_y - y + SymMatrix::identity(x.dim()));

  const double e = std::exp(lambda * c);
  const double rhs = e * (e - 1.0) * (e - 1.0) / (2.0 * (2.0 - e));
  return lhs <= rhs + 1e-9;
}

}  // namespace karcher
