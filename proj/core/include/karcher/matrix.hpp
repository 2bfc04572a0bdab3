#pragma once

#include <functional>
#include <vector>

namespace karcher {

/// Dense real symmetric matrix, stored row-major. Every constructor
/// symmetrizes its input via (M + M^T)/2, so entries(i,j) == entries(j,i)
/// holds exactly, not just up to roundoff.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim);  // zero matrix
  SymMatrix(int dim, const std::vector<double>& entries);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(const std::vector<double>& diag);

  int dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }
  double operator()(int i, int j) const {
    return e_[static_cast<std::size_t>(i) * dim_ + j];
  }
  const std::vector<double>& entries() const { return e_; }

  double trace() const;
  double frobenius_norm() const;

  SymMatrix& operator+=(const SymMatrix& rhs);
  SymMatrix& operator-=(const SymMatrix& rhs);
  SymMatrix& operator*=(double s);

 protected:
  void assign_symmetrized(int dim, const std::vector<double>& raw);

  int dim_ = 0;
  std::vector<double> e_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

/// Entrywise bit-for-bit equality (same dim, identical doubles).
bool bitwise_equal(const SymMatrix& a, const SymMatrix& b);

/// Symmetric positive definite matrix. Construction fails with
/// std::domain_error unless the smallest eigenvalue exceeds
/// 1e-13 * (1 + largest eigenvalue).
class SpdMatrix : public SymMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(const SymMatrix& m);
  SpdMatrix(int dim, const std::vector<double>& entries);

  static SpdMatrix identity(int dim);
  static SpdMatrix diagonal(const std::vector<double>& diag);

 private:
  void validate() const;
};

/// Spectral factorization of a symmetric matrix. Column k of `eigenvectors`
/// pairs with eigenvalues[k]; eigenvalues are sorted ascending.
struct EigenDecomposition {
  int dim = 0;
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;  // row-major, orthogonal

  double min_eigenvalue() const { return eigenvalues.front(); }
  double max_eigenvalue() const { return eigenvalues.back(); }
};

/// Cyclic Jacobi eigensolver. Caps at 100 sweeps with off-diagonal
/// convergence threshold 1e-14 * ||M||_F; throws std::runtime_error if the
/// cap is hit (ill-conditioned input).
EigenDecomposition sym_eigen(const SymMatrix& m);

/// Functional calculus Q f(diag) Q^T, re-symmetrized. Throws
/// std::domain_error when f is undefined (non-finite) on the spectrum.
SymMatrix matrix_fn(const SymMatrix& m, const std::function<double(double)>& f);
SymMatrix matrix_fn(const EigenDecomposition& eig,
                    const std::function<double(double)>& f);

SymMatrix spd_log(const SpdMatrix& a);
SpdMatrix spd_exp(const SymMatrix& v);
SpdMatrix spd_sqrt(const SpdMatrix& a);
SpdMatrix spd_inv_sqrt(const SpdMatrix& a);
SpdMatrix spd_pow(const SpdMatrix& a, double t);
SpdMatrix spd_inverse(const SpdMatrix& a);

/// Operator (spectral) norm: largest |eigenvalue|.
double spectral_norm(const SymMatrix& m);

}  // namespace karcher
