#include <doctest.h>

#include <cmath>

#include "karcher/matrix.hpp"
#include "test_util.hpp"

using namespace karcher;
using testutil::gaussian_spd;
using testutil::gaussian_sym;

TEST_CASE("sym_eigen diagonal case") {
  const EigenDecomposition e = sym_eigen(SymMatrix::diagonal({1.0, 2.0}));
  CHECK(e.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
  // eigenvectors are the standard basis up to sign
  CHECK(std::abs(e.eigenvectors[0]) == doctest::Approx(1.0));
  CHECK(std::abs(e.eigenvectors[3]) == doctest::Approx(1.0));
  CHECK(e.eigenvectors[1] == doctest::Approx(0.0));
}

TEST_CASE("sym_eigen identity has unit spectrum") {
  for (int dim : {1, 2, 5}) {
    const EigenDecomposition e = sym_eigen(SymMatrix::identity(dim));
    for (double v : e.eigenvalues) CHECK(v == doctest::Approx(1.0));
  }
}

TEST_CASE("sym_eigen reconstruction and orthogonality") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 5;
    const SymMatrix m = gaussian_sym(dim, rng);
    const EigenDecomposition e = sym_eigen(m);
    const double tol = 1e-10 * (1.0 + spectral_norm(m));

    // reconstruction residual, multiplied out with independent loops
    std::vector<double> scaled = e.eigenvectors;
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k) scaled[i * dim + k] *= e.eigenvalues[k];
    std::vector<double> qt(static_cast<std::size_t>(dim) * dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) qt[i * dim + j] = e.eigenvectors[j * dim + i];
    CHECK(testutil::max_abs_diff(testutil::mul(dim, scaled, qt), m.entries()) <
          tol);

    // Q^T Q = I
    const std::vector<double> gram =
        testutil::mul(dim, qt, e.eigenvectors);
    const std::vector<double> eye = SymMatrix::identity(dim).entries();
    CHECK(testutil::max_abs_diff(gram, eye) < tol);

    // ascending order
    for (int k = 1; k < dim; ++k)
      CHECK(e.eigenvalues[k] >= e.eigenvalues[k - 1]);
  }
}

TEST_CASE("matrix_fn basics") {
  CHECK(spectral_norm(spd_exp(SymMatrix(3)) - SymMatrix::identity(3)) < 1e-14);

  const SpdMatrix d = SpdMatrix::diagonal({std::exp(1.0), std::exp(2.0)});
  const SymMatrix lg = spd_log(d);
  CHECK(lg(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lg(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lg(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("sqrt then square round trip") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 4;
    const SpdMatrix a = gaussian_spd(dim, 0.7, rng);
    const SpdMatrix r = spd_sqrt(a);
    const std::vector<double> sq =
        testutil::mul(dim, r.entries(), r.entries());
    CHECK(testutil::max_abs_diff(sq, a.entries()) < 1e-10);
  }
}

TEST_CASE("log then exp round trip") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 4;
    const SpdMatrix a = gaussian_spd(dim, 0.8, rng);
    const SpdMatrix back = spd_exp(spd_log(a));
    CHECK(testutil::max_abs_diff(back.entries(), a.entries()) < 1e-9);
  }
}

TEST_CASE("matrix_fn rejects functions undefined on the spectrum") {
  const SymMatrix not_pd = SymMatrix::diagonal({1.0, -2.0});
  CHECK_THROWS_AS(matrix_fn(not_pd, [](double v) { return std::log(v); }),
                  std::domain_error);
}

TEST_CASE("SpdMatrix construction rejects non positive definite input") {
  CHECK_THROWS_AS(SpdMatrix(2, {1.0, 0.0, 0.0, -1.0}), std::domain_error);
  CHECK_THROWS_AS(SpdMatrix(2, {1.0, 1.0, 1.0, 1.0}), std::domain_error);
  CHECK_NOTHROW(SpdMatrix(2, {2.0, 1.0, 1.0, 2.0}));
}

TEST_CASE("symmetrization is exact") {
  const SymMatrix m(2, {1.0, 3.0, 5.0, 2.0});
  CHECK(m(0, 1) == m(1, 0));
  CHECK(m(0, 1) == doctest::Approx(4.0));
}

TEST_CASE("entries constructor validates size") {
  CHECK_THROWS_AS(SymMatrix(2, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(SymMatrix(0, {}), std::invalid_argument);
}
