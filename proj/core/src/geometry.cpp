#include "karcher/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "dense_ops.hpp"

namespace karcher {

namespace {

void check_same_dim(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

double thompson_distance(const SpdMatrix& a, const SpdMatrix& b) {
  check_same_dim(a, b);
  return detail::thompson_from_frame(detail::make_frame(a), b);
}

SpdMatrix geodesic(const SpdMatrix& a, const SpdMatrix& b, double t) {
  check_same_dim(a, b);
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("geodesic parameter must lie in [0,1]");
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const detail::Frame fa = detail::make_frame(a);
  const detail::Vec w = detail::congruence(fa.n, fa.inv_sqrt, b.entries());
  const EigenDecomposition ew = sym_eigen(SymMatrix(fa.n, w));
  std::vector<double> vals(ew.dim);
  for (int k = 0; k < ew.dim; ++k) vals[k] = std::pow(ew.eigenvalues[k], t);
  const detail::Vec p = detail::eig_assemble(ew, vals);
  return SpdMatrix(fa.n, detail::congruence(fa.n, fa.sqrt, p));
}

SymMatrix log_point(const SpdMatrix& x, const SpdMatrix& a) {
  check_same_dim(x, a);
  const detail::Frame fx = detail::make_frame(x);
  const detail::Vec w = detail::congruence(fx.n, fx.inv_sqrt, a.entries());
  const EigenDecomposition ew = sym_eigen(SymMatrix(fx.n, w));
  std::vector<double> vals(ew.dim);
  for (int k = 0; k < ew.dim; ++k) {
    if (!(ew.eigenvalues[k] > 0.0))
      throw std::domain_error("log_point requires positive definite input");
    vals[k] = std::log(ew.eigenvalues[k]);
  }
  const detail::Vec l = detail::eig_assemble(ew, vals);
  return SymMatrix(fx.n, detail::congruence(fx.n, fx.sqrt, l));
}

SpdMatrix exp_point(const SpdMatrix& x, const SymMatrix& v) {
  check_same_dim(x, v);
  const detail::Frame fx = detail::make_frame(x);
  const detail::Vec w = detail::congruence(fx.n, fx.inv_sqrt, v.entries());
  const EigenDecomposition ew = sym_eigen(SymMatrix(fx.n, w));
  std::vector<double> vals(ew.dim);
  for (int k = 0; k < ew.dim; ++k) vals[k] = std::exp(ew.eigenvalues[k]);
  const detail::Vec e = detail::eig_assemble(ew, vals);
  return SpdMatrix(fx.n, detail::congruence(fx.n, fx.sqrt, e));
}

bool loewner_leq(const SymMatrix& a, const SymMatrix& b) {
  check_same_dim(a, b);
  const double tol =
      1e-12 * (1.0 + spectral_norm(a) + spectral_norm(b));
  const EigenDecomposition diff = sym_eigen(b - a);
  return diff.min_eigenvalue() >= -tol;
}

TaylorRemainderReport taylor_remainder_check(const SymMatrix& x) {
  constexpr double kSlack = 1e-12;
  TaylorRemainderReport report;

  const EigenDecomposition ex = sym_eigen(x);
  const double norm_x = std::max(std::abs(ex.min_eigenvalue()),
                                 std::abs(ex.max_eigenvalue()));

  const SymMatrix expx = matrix_fn(ex, [](double v) { return std::exp(v); });
  const SymMatrix exp_rem = expx - x - SymMatrix::identity(x.dim());
  const double exp_lhs = spectral_norm(exp_rem);
  const double exp_rhs = 0.5 * norm_x * norm_x * std::exp(norm_x);
  report.exp_holds = exp_lhs <= exp_rhs + kSlack;

  const SymMatrix shifted = x - SymMatrix::identity(x.dim());
  const double norm_shift = spectral_norm(shifted);
  report.log_applicable = norm_shift < 1.0;
  if (report.log_applicable) {
    const SymMatrix logx = matrix_fn(ex, [](double v) {
      if (!(v > 0.0)) throw std::domain_error("log undefined on spectrum");
      return std::log(v);
    });
    const double log_lhs = spectral_norm(logx - shifted);
    const double log_rhs =
        norm_shift * norm_shift / (2.0 * (1.0 - norm_shift));
    report.log_holds = log_lhs <= log_rhs + kSlack;
  }
  return report;
}

}  // namespace karcher
