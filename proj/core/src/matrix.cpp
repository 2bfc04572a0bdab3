#include "karcher/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dense_ops.hpp"

namespace karcher {

namespace {

std::size_t sq(int n) { return static_cast<std::size_t>(n) * n; }

void check_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
}

}  // namespace

SymMatrix::SymMatrix(int dim) {
  check_dim(dim);
  dim_ = dim;
  e_.assign(sq(dim), 0.0);
}

SymMatrix::SymMatrix(int dim, const std::vector<double>& entries) {
  assign_symmetrized(dim, entries);
}

void SymMatrix::assign_symmetrized(int dim, const std::vector<double>& raw) {
  check_dim(dim);
  if (raw.size() != sq(dim))
    throw std::invalid_argument("entry count does not match dimension");
  dim_ = dim;
  e_ = raw;
  detail::symmetrize(dim_, e_);
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.e_[i * static_cast<std::size_t>(dim) + i] = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& diag) {
  SymMatrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.dim_; ++i)
    m.e_[i * static_cast<std::size_t>(m.dim_) + i] = diag[i];
  return m;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : e_) s += v * v;
  return std::sqrt(s);
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& rhs) {
  if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += rhs.e_[i];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& rhs) {
  if (dim_ != rhs.dim_) throw std::invalid_argument("dimension mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= rhs.e_[i];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& v : e_) v *= s;
  return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

bool bitwise_equal(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) return false;
  return std::memcmp(a.entries().data(), b.entries().data(),
                     a.entries().size() * sizeof(double)) == 0;
}

SpdMatrix::SpdMatrix(const SymMatrix& m) : SymMatrix(m) { validate(); }

SpdMatrix::SpdMatrix(int dim, const std::vector<double>& entries) {
  assign_symmetrized(dim, entries);
  validate();
}

SpdMatrix SpdMatrix::identity(int dim) {
  return SpdMatrix(SymMatrix::identity(dim));
}

SpdMatrix SpdMatrix::diagonal(const std::vector<double>& diag) {
  return SpdMatrix(SymMatrix::diagonal(diag));
}

void SpdMatrix::validate() const {
  if (dim_ == 0) throw std::domain_error("empty matrix is not positive definite");
  // Gershgorin bounds clear well-conditioned matrices without an
  // eigendecomposition; fall back to the exact spectrum otherwise.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim_; ++i) {
    double radius = 0.0;
    for (int j = 0; j < dim_; ++j)
      if (j != i) radius += std::abs((*this)(i, j));
    lo = std::min(lo, (*this)(i, i) - radius);
    hi = std::max(hi, (*this)(i, i) + radius);
  }
  if (lo > 1e-13 * (1.0 + hi)) return;
  const EigenDecomposition eig = sym_eigen(*this);
  if (!(eig.min_eigenvalue() > 1e-13 * (1.0 + eig.max_eigenvalue())))
    throw std::domain_error("matrix is not (safely) positive definite");
}

namespace {

// One cyclic Jacobi pass infrastructure: rotate in the (p,q) plane.
void jacobi_rotate(int n, std::vector<double>& a, std::vector<double>& v,
                   int p, int q) {
  const double apq = a[p * n + q];
  if (apq == 0.0) return;
  const double app = a[p * n + p];
  const double aqq = a[q * n + q];
  const double theta = 0.5 * (aqq - app) / apq;
  const double t =
      (theta >= 0.0 ? 1.0 : -1.0) /
      (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const double tau = s / (1.0 + c);

  a[p * n + p] = app - t * apq;
  a[q * n + q] = aqq + t * apq;
  a[p * n + q] = 0.0;
  a[q * n + p] = 0.0;
  for (int k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a[k * n + p];
    const double akq = a[k * n + q];
    a[k * n + p] = akp - s * (akq + tau * akp);
    a[p * n + k] = a[k * n + p];
    a[k * n + q] = akq + s * (akp - tau * akq);
    a[q * n + k] = a[k * n + q];
  }
  for (int k = 0; k < n; ++k) {
    const double vkp = v[k * n + p];
    const double vkq = v[k * n + q];
    v[k * n + p] = vkp - s * (vkq + tau * vkp);
    v[k * n + q] = vkq + s * (vkp - tau * vkq);
  }
}

double off_diagonal_norm(int n, const std::vector<double>& a) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& m) {
  const int n = m.dim();
  if (n == 0) throw std::invalid_argument("cannot decompose an empty matrix");

  std::vector<double> a = m.entries();
  std::vector<double> v(sq(n), 0.0);
  for (int i = 0; i < n; ++i) v[i * static_cast<std::size_t>(n) + i] = 1.0;

  const double conv = 1e-14 * m.frobenius_norm();
  bool converged = (n == 1);
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    if (off_diagonal_norm(n, a) <= conv) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) jacobi_rotate(n, a, v, p, q);
  }
  if (!converged && off_diagonal_norm(n, a) > conv)
    throw std::runtime_error("sym_eigen: Jacobi sweeps did not converge");

  EigenDecomposition out;
  out.dim = n;
  out.eigenvalues.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return a[i * static_cast<std::size_t>(n) + i] <
           a[j * static_cast<std::size_t>(n) + j];
  });
  out.eigenvectors.resize(sq(n));
  for (int k = 0; k < n; ++k) {
    const int src = order[k];
    out.eigenvalues[k] = a[src * static_cast<std::size_t>(n) + src];
    for (int i = 0; i < n; ++i)
      out.eigenvectors[i * static_cast<std::size_t>(n) + k] =
          v[i * static_cast<std::size_t>(n) + src];
  }
  return out;
}

SymMatrix matrix_fn(const EigenDecomposition& eig,
                    const std::function<double(double)>& f) {
  std::vector<double> vals(eig.dim);
  for (int k = 0; k < eig.dim; ++k) {
    vals[k] = f(eig.eigenvalues[k]);
    if (!std::isfinite(vals[k]))
      throw std::domain_error("matrix_fn: function undefined on spectrum");
  }
  return SymMatrix(eig.dim, detail::eig_assemble(eig, vals));
}

SymMatrix matrix_fn(const SymMatrix& m, const std::function<double(double)>& f) {
  return matrix_fn(sym_eigen(m), f);
}

SymMatrix spd_log(const SpdMatrix& a) {
  return matrix_fn(a, [](double x) { return std::log(x); });
}

SpdMatrix spd_exp(const SymMatrix& v) {
  return SpdMatrix(matrix_fn(v, [](double x) { return std::exp(x); }));
}

SpdMatrix spd_sqrt(const SpdMatrix& a) {
  return SpdMatrix(matrix_fn(a, [](double x) { return std::sqrt(x); }));
}

SpdMatrix spd_inv_sqrt(const SpdMatrix& a) {
  return SpdMatrix(matrix_fn(a, [](double x) { return 1.0 / std::sqrt(x); }));
}

SpdMatrix spd_pow(const SpdMatrix& a, double t) {
  return SpdMatrix(matrix_fn(a, [t](double x) { return std::pow(x, t); }));
}

SpdMatrix spd_inverse(const SpdMatrix& a) {
  return SpdMatrix(matrix_fn(a, [](double x) { return 1.0 / x; }));
}

double spectral_norm(const SymMatrix& m) {
  const EigenDecomposition eig = sym_eigen(m);
  return std::max(std::abs(eig.min_eigenvalue()),
                  std::abs(eig.max_eigenvalue()));
}

namespace detail {

Frame make_frame(const EigenDecomposition& eig) {
  Frame f;
  f.n = eig.dim;
  std::vector<double> s(eig.dim), is(eig.dim);
  for (int k = 0; k < eig.dim; ++k) {
    if (!(eig.eigenvalues[k] > 0.0))
      throw std::domain_error("frame requires a positive definite matrix");
    s[k] = std::sqrt(eig.eigenvalues[k]);
    is[k] = 1.0 / s[k];
  }
  f.sqrt = eig_assemble(eig, s);
  f.inv_sqrt = eig_assemble(eig, is);
  return f;
}

Frame make_frame(const SpdMatrix& x) { return make_frame(sym_eigen(x)); }

double raw_spectral_norm(int n, const Vec& m) {
  const EigenDecomposition eig = sym_eigen(SymMatrix(n, m));
  return std::max(std::abs(eig.min_eigenvalue()),
                  std::abs(eig.max_eigenvalue()));
}

double thompson_from_frame(const Frame& fx, const SymMatrix& b) {
  const Vec w = congruence(fx.n, fx.inv_sqrt, b.entries());
  const EigenDecomposition eig = sym_eigen(SymMatrix(fx.n, w));
  if (!(eig.min_eigenvalue() > 0.0))
    throw std::domain_error("thompson distance requires positive definite input");
  return std::max(std::abs(std::log(eig.min_eigenvalue())),
                  std::abs(std::log(eig.max_eigenvalue())));
}

}  // namespace detail

}  // namespace karcher
