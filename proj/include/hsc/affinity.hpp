#pragma once

#include <limits>
#include <string>

#include "hsc/error.hpp"
#include "hsc/geometry.hpp"
#include "hsc/types.hpp"

namespace hsc {

enum class KernelKind { GaussianHyperbolic, PoissonHyperbolic, GaussianEuclidean, PoissonEuclidean };

const char* to_string(KernelKind kind);

/// Similarity kernel on geodesic (hyperbolic kinds) or Euclidean distance d:
///   Gaussian  exp(-d^2 / sigma^2) = exp(-a d^2),   a = 1 / sigma^2
///   Poisson   exp(-d / (2 sigma)) = exp(-a d),     a = 1 / (2 sigma)
/// and 0 whenever d > epsilon.
struct KernelSpec {
  KernelKind kind = KernelKind::GaussianHyperbolic;
  double sigma = 0.1;
  double epsilon = std::numeric_limits<double>::infinity();

  bool hyperbolic() const {
    return kind == KernelKind::GaussianHyperbolic || kind == KernelKind::PoissonHyperbolic;
  }
  bool gaussian() const {
    return kind == KernelKind::GaussianHyperbolic || kind == KernelKind::GaussianEuclidean;
  }
  double a() const { return gaussian() ? 1.0 / (sigma * sigma) : 1.0 / (2.0 * sigma); }

  /// Same family with the geometry swapped (hyperbolic <-> Euclidean).
  KernelSpec with_geometry(bool hyperbolic_geometry) const;

  void validate() const;
};

inline double kernel_from_distance(const KernelSpec& spec, double d) {
  if (d > spec.epsilon) return 0.0;
  return spec.gaussian() ? std::exp(-(d * d) / (spec.sigma * spec.sigma)) : std::exp(-d / (2.0 * spec.sigma));
}

/// Kernel between two points of the kernel's native space (ball for hyperbolic kinds).
template <typename DerivedA, typename DerivedB>
double kernel_value(const KernelSpec& spec, const Eigen::MatrixBase<DerivedA>& x,
                    const Eigen::MatrixBase<DerivedB>& y) {
  const double d = spec.hyperbolic() ? dist_disc(x, y) : (x - y).norm();
  return kernel_from_distance(spec, d);
}

enum class AffinityRole { W, Wprime, F };

struct AffinityMatrix {
  Matrix entries;
  AffinityRole role = AffinityRole::W;

  Index size() const { return entries.rows(); }
};

/// W(i, j) = kernel(x_i, x_j) over the rows of `points`. Rows are split across
/// `threads` workers; the result does not depend on the thread count.
AffinityMatrix build_affinity(const Matrix& points, const KernelSpec& spec, int threads = 1);

/// W'(i, j) = exp(-|w_i - w_j|^2 / sigma2^2) over the rows w_i of W.
AffinityMatrix build_modified_affinity(const AffinityMatrix& w, double sigma2);

/// V(i, j) = kernel(landmark_i, x_j), an m x N matrix.
Matrix build_landmark_affinity(const Matrix& landmarks, const Matrix& points, const KernelSpec& spec);

/// Column-normalises V into E, scales rows by D_E = diag((sum_j E(i, j))^{-1/2})
/// to get Z = D_E E and returns F = Z^T Z (N x N). Landmarks whose row of E is
/// all zero are dropped and flagged. Throws IsolatedPoint when a column of V is zero.
AffinityMatrix landmark_normalize(const Matrix& v, Flags* flags = nullptr);

/// Z = D_E E from the same construction, used by the low-rank fast mode.
Matrix landmark_factor(const Matrix& v, Flags* flags = nullptr);

}  // namespace hsc
