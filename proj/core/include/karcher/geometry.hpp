#pragma once

#include "karcher/matrix.hpp"

namespace karcher {

/// Thompson metric d(A,B) = ||log(A^{-1/2} B A^{-1/2})||, computed as
/// max(|log l_min|, |log l_max|) of the whitened spectrum.
double thompson_distance(const SpdMatrix& a, const SpdMatrix& b);

/// Weighted geometric mean A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2},
/// t in [0,1]. Endpoints are returned bit-exactly.
SpdMatrix geodesic(const SpdMatrix& a, const SpdMatrix& b, double t);

/// Relative operator entropy X^{1/2} log(X^{-1/2} A X^{-1/2}) X^{1/2}:
/// the tangent vector at X pointing toward A.
SymMatrix log_point(const SpdMatrix& x, const SpdMatrix& a);

/// Inverse of log_point: X^{1/2} exp(X^{-1/2} V X^{-1/2}) X^{1/2}.
SpdMatrix exp_point(const SpdMatrix& x, const SymMatrix& v);

/// Loewner order A <= B up to tolerance 1e-12 * (1 + ||A|| + ||B||) on the
/// smallest eigenvalue of B - A.
bool loewner_leq(const SymMatrix& a, const SymMatrix& b);

struct TaylorRemainderReport {
  bool exp_holds = false;
  bool log_applicable = false;  // requires ||X - I|| < 1
  bool log_holds = false;
};

/// Checks the explicit first-order remainder bounds
///   ||exp(X) - X - I||  <= ||X||^2 e^{||X||} / 2
///   ||log(X) - (X - I)|| <= ||X-I||^2 / (2 (1 - ||X-I||))   (when ||X-I|| < 1)
/// with slack 1e-12.
TaylorRemainderReport taylor_remainder_check(const SymMatrix& x);

}  // namespace karcher
