#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hsc/types.hpp"

namespace hsc {

struct ConsistencyReport {
  std::string check_name;
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  std::map<std::string, double> statistics;
  bool passed = false;
  std::uint64_t seed = 0;
};

/// Margin of the truncated disc H = {x : |x| <= 1 - margin} used when sampling.
inline constexpr double kTruncationMargin = 1e-4;

enum class DominationKernel { Gaussian, Poisson };

/// Counts pairs x, y uniform in H where the hyperbolic kernel exceeds its
/// Euclidean bound: exp(-a d^2) <= exp(-a r^2) for the Gaussian, and
/// exp(-a d) <= exp(-(a/2) r^2) for the Poisson kernel on pairs with r <= 1.
/// `swapped` tests the reversed inequality and should fail.
ConsistencyReport check_kernel_domination(int dim, std::int64_t n_pairs, double a, DominationKernel kind,
                                          std::uint64_t seed, bool swapped = false);

/// Monte Carlo integral of exp(-a d(x,0)^2) over H against (pi/a)^(dim/2).
ConsistencyReport check_l1_bound(int dim, std::int64_t n_samples, double a, std::uint64_t seed);

enum class SignalProfile { HyperbolicGaussian, EuclideanGaussian, Constant };

/// Samples of a radial profile on the cell-centred grid x_j = (j - (n-1)/2) h,
/// h = 2 extent / n, and its discrete transform
/// F(p, q) = h^2 sum f(x_j, x_l) exp(-i (w_p x_j + w_q x_l)), w_p = p * 2 pi / (n h),
/// for p, q in [-n/2, n/2). Index (p + n/2, q + n/2).
/// The hyperbolic profile is exp(-a d(x,0)^2) on H and zero outside.
struct FourierGrid {
  int n = 0;
  double extent = 0.0;
  double spacing = 0.0;        // h
  double frequency_step = 0.0; // 2 pi / (n h)
  Matrix signal;
  Eigen::MatrixXcd transform;

  double magnitude(int p, int q) const { return std::abs(transform(p + n / 2, q + n / 2)); }
};

FourierGrid fourier_grid(int grid_size, double extent, double a, SignalProfile profile);

/// Compares transform magnitudes at integer frequency pairs of equal modulus
/// that are not related by the grid's own symmetries, e.g. (5,0) and (3,4).
/// n_rotations groups are drawn (by seed) from those whose magnitudes all exceed
/// 1e-6 of the peak; passes when the largest relative discrepancy is <= 1e-2.
ConsistencyReport check_radial_ft(int grid_size, double extent, double a, int n_rotations, std::uint64_t seed,
                                  SignalProfile profile = SignalProfile::HyperbolicGaussian);

/// Fits log of the shell-averaged magnitude against |w| over the band where the
/// average stays above 1e-12 of the peak. Passes when the fitted decay l > 0 and R^2 >= 0.9.
ConsistencyReport check_ft_decay(int grid_size, double extent, double a, std::uint64_t seed,
                                 SignalProfile profile = SignalProfile::HyperbolicGaussian);

enum class SampleDistribution { BlobMixture, UniformH };

/// i.i.d. sample of n points of the disc. The mixture embeds three Gaussian blobs
/// (centres at radius 1, 120 degrees apart, spread 0.4) with margin 1; UniformH is
/// uniform on H.
Matrix sample_disc(SampleDistribution distribution, Index n, int dim, std::uint64_t seed);

/// The `count` largest eigenvalues of a symmetric matrix by Lanczos with full
/// reorthogonalisation, descending.
Vector lanczos_largest(const Matrix& symmetric, int count, std::uint64_t seed, double tol = 1e-11, int max_iter = 400);

/// The k smallest eigenvalues of I - D^{-1/2} W D^{-1/2}, W the hyperbolic Gaussian kernel matrix with parameter a.
Vector normalized_laplacian_spectrum(const Matrix& disc_points, double a, int k, std::uint64_t seed);

struct RateConfig {
  std::vector<Index> ns{100, 200, 400, 800, 1600};
  int trials = 10;
  SampleDistribution distribution = SampleDistribution::BlobMixture;
  std::uint64_t seed = 42;
  int k = 5;
  double a = 1.0;
  int dim = 2;
  int reference_factor = 8;
};

/// Mean over trials of max_j |lambda_j(n) - lambda_j(reference)| per sample size,
/// then the least-squares slope of log(deviation) against log(n). Passes when the slope is <= -0.35.
ConsistencyReport check_convergence_rate(const RateConfig& cfg);

}  // namespace hsc
