#pragma once

// Internal dense kernels shared by the translation units of karcher_core.
// Matrices are raw row-major n*n vectors; all dimensions fit in an int.

#include <cmath>
#include <vector>

#include "karcher/matrix.hpp"

namespace karcher::detail {

using Vec = std::vector<double>;

inline void mat_mul(int n, const double* a, const double* b, double* out) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out[i * n + j] = 0.0;
    for (int k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      if (aik == 0.0) continue;
      const double* brow = b + k * n;
      double* orow = out + i * n;
      for (int j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
  }
}

inline Vec mat_mul(int n, const Vec& a, const Vec& b) {
  Vec out(static_cast<std::size_t>(n) * n);
  mat_mul(n, a.data(), b.data(), out.data());
  return out;
}

inline void symmetrize(int n, Vec& m) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m[i * n + j] + m[j * n + i]);
      m[i * n + j] = v;
      m[j * n + i] = v;
    }
}

// W * B * W for symmetric W (used with W = X^{+-1/2}); result symmetrized.
inline Vec congruence(int n, const Vec& w, const Vec& b) {
  Vec t = mat_mul(n, w, b);
  Vec out = mat_mul(n, t, w);
  symmetrize(n, out);
  return out;
}

// Rebuild Q diag(vals) Q^T from an eigendecomposition, symmetrized.
inline Vec eig_assemble(const EigenDecomposition& e, const Vec& vals) {
  const int n = e.dim;
  Vec scaled(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      scaled[i * n + k] = e.eigenvectors[i * n + k] * vals[k];
  Vec out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += scaled[i * n + k] * e.eigenvectors[j * n + k];
      out[i * n + j] = s;
    }
  symmetrize(n, out);
  return out;
}

// Eigendecomposition-backed frame for congruence transforms by X^{+-1/2}.
struct Frame {
  int n = 0;
  Vec sqrt;
  Vec inv_sqrt;
};

Frame make_frame(const SpdMatrix& x);
Frame make_frame(const EigenDecomposition& eig);

// max |eigenvalue| straight from a raw symmetric matrix.
double raw_spectral_norm(int n, const Vec& m);

// Thompson distance given the inv-sqrt frame of the first argument.
double thompson_from_frame(const Frame& fx, const SymMatrix& b);

}  // namespace karcher::detail
