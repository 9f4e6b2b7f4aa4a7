#pragma once

#include <vector>

#include "hsc/affinity.hpp"
#include "hsc/types.hpp"

namespace hsc {

/// D, L = D - W' and the symmetric normalised Laplacian I - D^{-1/2} W' D^{-1/2}.
struct LaplacianBundle {
  Vector degree;
  Matrix laplacian;
  Matrix normalized;
};

/// Throws IsolatedVertex when a degree falls below 1e-12.
LaplacianBundle build_laplacian(const Matrix& affinity);
inline LaplacianBundle build_laplacian(const AffinityMatrix& affinity) { return build_laplacian(affinity.entries); }

/// Random-walk Laplacian D^{-1} L = I - D^{-1} W. Diagnostic only; the pipelines use the symmetric form.
Matrix random_walk_laplacian(const Matrix& affinity);

struct SpectralEmbedding {
  Vector eigenvalues;   // ascending
  Matrix vectors;       // U, N x k, orthonormal columns
  Matrix rows;          // T, U with unit-norm rows
  std::vector<Index> zero_rows;
};

/// The k algebraically smallest eigenpairs of a symmetric matrix, ascending.
/// Each eigenvector is oriented so its first non-negligible entry is positive.
SpectralEmbedding smallest_eigenpairs(const Matrix& symmetric, int k);

/// Scales rows to unit norm. Zero rows become e_1 and are reported in `zero_rows`.
Matrix row_normalize(const Matrix& u, std::vector<Index>* zero_rows = nullptr);

/// Ncut(A, B) = cut(A, B) / vol(A) + cut(A, B) / vol(B), where side[i] != 0 puts i in B.
/// Of the relaxed problem min z^T L~ z / z^T z subject to z^T D^{1/2} 1 = 0
/// (y^T D 1 = 0 for the discrete indicator), the second eigenvalue of L~ is a
/// lower bound for this value over all bipartitions.
double ncut(const Matrix& w, const std::vector<int>& side);

/// z^T L z / z^T z.
double rayleigh_quotient(const Matrix& l, const Vector& z);

}  // namespace hsc
