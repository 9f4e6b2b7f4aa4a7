#include "doctest.h"

#include <cmath>

#include "hsc/rng.hpp"
#include "hsc/spectral.hpp"
#include "oracles.hpp"

using hsc::Matrix;
using hsc::Vector;

namespace {

Matrix random_symmetric(hsc::Rng& rng, int n) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal();
  return a;
}

Matrix random_weights(hsc::Rng& rng, int n, double density) {
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < density) w(i, j) = w(j, i) = rng.uniform(0.05, 1.0);
  return w;
}

}  // namespace

TEST_CASE("build_laplacian") {
  hsc::Rng rng(21);
  Matrix w = random_weights(rng, 8, 0.7);
  w.diagonal().setOnes();
  const hsc::LaplacianBundle b = hsc::build_laplacian(w);
  CHECK((b.degree - w.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((b.laplacian - (Matrix(b.degree.asDiagonal()) - w)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(b.normalized == b.normalized.transpose());
  const Vector s = b.degree.cwiseSqrt();
  CHECK((b.normalized * s).norm() < 1e-12);  // D^{1/2} 1 spans the kernel

  Matrix iso = w;
  iso.row(5).setZero();
  iso.col(5).setZero();
  try {
    hsc::build_laplacian(iso);
    FAIL("expected an isolated-vertex error");
  } catch (const hsc::Error& e) {
    CHECK(e.kind() == hsc::ErrorKind::IsolatedVertex);
    CHECK(std::string(e.what()).find('5') != std::string::npos);
  }
}

TEST_CASE("smallest_eigenpairs against a Jacobi oracle") {
  hsc::Rng rng(22);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + static_cast<int>(rng.index(11));
    const int k = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    const Matrix a = random_symmetric(rng, n);
    const hsc::SpectralEmbedding e = hsc::smallest_eigenpairs(a, k);
    const auto [values, vectors] = oracle::jacobi_eigen(a);
    CHECK((e.eigenvalues - values.head(k)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((a * e.vectors - e.vectors * e.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(oracle::principal_angle(e.vectors, vectors.leftCols(k)) <= 1e-6);
  }
  CHECK_THROWS_AS(hsc::smallest_eigenpairs(Matrix::Identity(3, 3), 4), hsc::Error);
  Matrix asym = Matrix::Identity(3, 3);
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(hsc::smallest_eigenpairs(asym, 2), hsc::Error);
}

TEST_CASE("eigenvector orientation is fixed") {
  hsc::Rng rng(23);
  const Matrix a = random_symmetric(rng, 6);
  const hsc::SpectralEmbedding e = hsc::smallest_eigenpairs(a, 3);
  for (int c = 0; c < 3; ++c) {
    int first = 0;
    while (std::abs(e.vectors(first, c)) <= 1e-8 * e.vectors.col(c).cwiseAbs().maxCoeff()) ++first;
    CHECK(e.vectors(first, c) > 0);
  }
  const hsc::SpectralEmbedding again = hsc::smallest_eigenpairs(a, 3);
  CHECK(again.vectors == e.vectors);
}

TEST_CASE("row_normalize") {
  Matrix u(3, 2);
  u << 3, 4, 0, 0, -1, 0;
  std::vector<hsc::Index> zero;
  const Matrix t = hsc::row_normalize(u, &zero);
  CHECK(t(0, 0) == doctest::Approx(0.6));
  CHECK(t(0, 1) == doctest::Approx(0.8));
  CHECK(t(1, 0) == 1.0);
  CHECK(t(1, 1) == 0.0);
  CHECK(zero == std::vector<hsc::Index>{1});
  CHECK(t(2, 0) == -1.0);
}

TEST_CASE("ncut is bounded below by the second eigenvalue") {
  hsc::Rng rng(24);
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + static_cast<int>(rng.index(6));
    Matrix w = random_weights(rng, n, 0.8);
    w.diagonal().setConstant(1.0);
    const double lambda2 = hsc::smallest_eigenpairs(hsc::build_laplacian(w).normalized, 2).eigenvalues(1);
    double best = INFINITY;
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      std::vector<int> side(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) side[static_cast<std::size_t>(i)] = (mask >> i) & 1;
      best = std::min(best, hsc::ncut(w, side));
    }
    CHECK(best >= lambda2 - 1e-9);
  }
  Matrix w = Matrix::Ones(3, 3);
  CHECK_THROWS_AS(hsc::ncut(w, {0, 0, 0}), hsc::Error);
  // two disconnected pairs: the natural cut costs nothing
  Matrix blocks = Matrix::Zero(4, 4);
  blocks.topLeftCorner(2, 2).setOnes();
  blocks.bottomRightCorner(2, 2).setOnes();
  CHECK(hsc::ncut(blocks, {0, 0, 1, 1}) == 0.0);
}

TEST_CASE("rayleigh_quotient") {
  Matrix l = Matrix::Zero(2, 2);
  l.diagonal() << 1.0, 3.0;
  CHECK(hsc::rayleigh_quotient(l, Vector::Ones(2)) == doctest::Approx(2.0));
}
