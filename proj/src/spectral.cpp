#include "hsc/spectral.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace hsc {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) fail(ErrorKind::InvalidInput, std::string(what) + ": matrix must be square and non-empty");
  if (!m.allFinite()) fail(ErrorKind::InvalidInput, std::string(what) + ": non-finite entries");
}

Vector checked_degrees(const Matrix& w) {
  require_square(w, "build_laplacian");
  if ((w.array() < 0.0).any()) fail(ErrorKind::InvalidInput, "build_laplacian: affinity must be nonnegative");
  Vector degree = w.rowwise().sum();
  for (Index i = 0; i < degree.size(); ++i) {
    if (degree(i) < 1e-12) {
      std::ostringstream os;
      os << "build_laplacian: vertex " << i << " has degree " << degree(i) << " (isolated)";
      throw Error(ErrorKind::IsolatedVertex, os.str());
    }
  }
  return degree;
}

}  // namespace

LaplacianBundle build_laplacian(const Matrix& w) {
  LaplacianBundle out;
  out.degree = checked_degrees(w);
  const Index n = w.rows();
  out.laplacian = -w;
  out.laplacian.diagonal() += out.degree;
  const Vector inv_sqrt = out.degree.cwiseSqrt().cwiseInverse();
  Matrix normalized(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const double v = -inv_sqrt(i) * w(i, j) * inv_sqrt(j);
      normalized(i, j) = v;
      normalized(j, i) = v;
    }
  }
  normalized.diagonal().array() += 1.0;
  out.normalized = std::move(normalized);
  return out;
}

Matrix random_walk_laplacian(const Matrix& w) {
  const Vector degree = checked_degrees(w);
  Matrix out = -(degree.cwiseInverse().asDiagonal() * w);
  out.diagonal().array() += 1.0;
  return out;
}

SpectralEmbedding smallest_eigenpairs(const Matrix& a, int k) {
  require_square(a, "smallest_eigenpairs");
  const Index n = a.rows();
  if (k < 1 || k > n) fail(ErrorKind::InvalidInput, "smallest_eigenpairs: need 1 <= k <= N");
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) fail(ErrorKind::InvalidInput, "smallest_eigenpairs: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) fail(ErrorKind::NumericalDegeneracy, "smallest_eigenpairs: eigensolver did not converge");

  SpectralEmbedding out;
  out.eigenvalues = solver.eigenvalues().head(k);
  out.vectors = solver.eigenvectors().leftCols(k);
  for (Index c = 0; c < k; ++c) {
    auto col = out.vectors.col(c);
    const double scale = col.cwiseAbs().maxCoeff();
    for (Index i = 0; i < n; ++i) {
      if (std::abs(col(i)) > 1e-8 * scale) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
  out.rows = row_normalize(out.vectors, &out.zero_rows);
  return out;
}

Matrix row_normalize(const Matrix& u, std::vector<Index>* zero_rows) {
  Matrix t = u;
  for (Index i = 0; i < t.rows(); ++i) {
    const double n = t.row(i).norm();
    if (n > 0.0) {
      t.row(i) /= n;
    } else {
      t.row(i).setZero();
      if (t.cols() > 0) t(i, 0) = 1.0;
      if (zero_rows) zero_rows->push_back(i);
    }
  }
  return t;
}

double ncut(const Matrix& w, const std::vector<int>& side) {
  require_square(w, "ncut");
  if (static_cast<Index>(side.size()) != w.rows()) fail(ErrorKind::InvalidPartition, "ncut: partition length mismatch");
  double cut = 0.0, vol_a = 0.0, vol_b = 0.0;
  Index count_b = 0;
  for (Index i = 0; i < w.rows(); ++i) {
    const bool in_b = side[static_cast<std::size_t>(i)] != 0;
    count_b += in_b;
    const double row = w.row(i).sum();
    (in_b ? vol_b : vol_a) += row;
    if (!in_b) continue;
    for (Index j = 0; j < w.cols(); ++j)
      if (side[static_cast<std::size_t>(j)] == 0) cut += w(i, j);
  }
  if (count_b == 0 || count_b == w.rows()) fail(ErrorKind::InvalidPartition, "ncut: both sides must be non-empty");
  if (!(vol_a > 0.0) || !(vol_b > 0.0)) fail(ErrorKind::InvalidPartition, "ncut: zero volume side");
  return cut / vol_a + cut / vol_b;
}

double rayleigh_quotient(const Matrix& l, const Vector& z) {
  require_square(l, "rayleigh_quotient");
  if (z.size() != l.rows()) fail(ErrorKind::InvalidInput, "rayleigh_quotient: dimension mismatch");
  const double zz = z.squaredNorm();
  if (!(zz > 0.0)) fail(ErrorKind::InvalidInput, "rayleigh_quotient: zero vector");
  return z.dot(l * z) / zz;
}

}  // namespace hsc
