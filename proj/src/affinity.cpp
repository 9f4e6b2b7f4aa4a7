#include "hsc/affinity.hpp"

#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

namespace hsc {

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::GaussianHyperbolic: return "gaussian-hyperbolic";
    case KernelKind::PoissonHyperbolic: return "poisson-hyperbolic";
    case KernelKind::GaussianEuclidean: return "gaussian-euclidean";
    case KernelKind::PoissonEuclidean: return "poisson-euclidean";
  }
  return "unknown";
}

KernelSpec KernelSpec::with_geometry(bool hyperbolic_geometry) const {
  KernelSpec out = *this;
  if (gaussian())
    out.kind = hyperbolic_geometry ? KernelKind::GaussianHyperbolic : KernelKind::GaussianEuclidean;
  else
    out.kind = hyperbolic_geometry ? KernelKind::PoissonHyperbolic : KernelKind::PoissonEuclidean;
  return out;
}

void KernelSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorKind::InvalidInput, "kernel sigma must be positive and finite");
  if (!(epsilon > 0.0)) fail(ErrorKind::InvalidInput, "kernel epsilon must be positive");
}

namespace {

// 1 - |x_i|^2 per row, checked to be positive.
Vector ball_gaps(const Matrix& points) {
  Vector gaps(points.rows());
  for (Index i = 0; i < points.rows(); ++i) gaps(i) = detail::ball_gap(points.row(i), "build_affinity");
  return gaps;
}

}  // namespace

AffinityMatrix build_affinity(const Matrix& points, const KernelSpec& spec, int threads) {
  spec.validate();
  const Index n = points.rows();
  if (n < 2) fail(ErrorKind::InvalidInput, "build_affinity: need at least 2 points");
  if (!points.allFinite()) fail(ErrorKind::InvalidInput, "build_affinity: non-finite coordinates");
  const bool hyperbolic = spec.hyperbolic();
  const Vector gaps = hyperbolic ? ball_gaps(points) : Vector();

  Matrix w(n, n);
  auto fill_rows = [&](int worker, int workers) {
    for (Index i = worker; i < n; i += workers) {
      w(i, i) = kernel_from_distance(spec, 0.0);
      for (Index j = i + 1; j < n; ++j) {
        const double sq = (points.row(i) - points.row(j)).squaredNorm();
        const double d = hyperbolic ? disc_distance_from_ratio(2 * sq / (gaps(i) * gaps(j))) : std::sqrt(sq);
        const double k = kernel_from_distance(spec, d);
        w(i, j) = k;
        w(j, i) = k;
      }
    }
  };

  const int workers = std::max(1, threads);
  if (workers == 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(fill_rows, t, workers);
    for (auto& th : pool) th.join();
  }
  return {std::move(w), AffinityRole::W};
}

AffinityMatrix build_modified_affinity(const AffinityMatrix& w, double sigma2) {
  if (!(sigma2 > 0.0)) fail(ErrorKind::InvalidInput, "build_modified_affinity: sigma2 must be positive");
  const Matrix& m = w.entries;
  if (m.rows() != m.cols()) fail(ErrorKind::InvalidInput, "build_modified_affinity: W must be square");
  const Index n = m.rows();
  const Matrix gram = m * m.transpose();
  const Vector sq = gram.diagonal();
  const double scale = sigma2 * sigma2;

  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    out(i, i) = 1.0;
    for (Index j = i + 1; j < n; ++j) {
      const double d2 = std::max(0.0, sq(i) + sq(j) - 2.0 * gram(i, j));
      const double v = std::exp(-d2 / scale);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return {std::move(out), AffinityRole::Wprime};
}

Matrix build_landmark_affinity(const Matrix& landmarks, const Matrix& points, const KernelSpec& spec) {
  spec.validate();
  if (landmarks.rows() < 1) fail(ErrorKind::InvalidInput, "build_landmark_affinity: no landmarks");
  if (points.rows() < 2) fail(ErrorKind::InvalidInput, "build_landmark_affinity: need at least 2 points");
  if (landmarks.cols() != points.cols()) fail(ErrorKind::InvalidInput, "build_landmark_affinity: dimension mismatch");
  const bool hyperbolic = spec.hyperbolic();
  Vector lgaps, pgaps;
  if (hyperbolic) {
    lgaps = ball_gaps(landmarks);
    pgaps = ball_gaps(points);
  }
  Matrix v(landmarks.rows(), points.rows());
  for (Index j = 0; j < points.rows(); ++j) {
    for (Index i = 0; i < landmarks.rows(); ++i) {
      const double sq = (landmarks.row(i) - points.row(j)).squaredNorm();
      const double d = hyperbolic ? disc_distance_from_ratio(2 * sq / (lgaps(i) * pgaps(j))) : std::sqrt(sq);
      v(i, j) = kernel_from_distance(spec, d);
    }
  }
  return v;
}

Matrix landmark_factor(const Matrix& v, Flags* flags) {
  if (v.rows() < 1 || v.cols() < 1) fail(ErrorKind::InvalidInput, "landmark_normalize: empty V");
  if ((v.array() < 0.0).any()) fail(ErrorKind::InvalidInput, "landmark_normalize: V must be nonnegative");
  const Vector col_sums = v.colwise().sum().transpose();
  std::vector<Index> isolated;
  for (Index j = 0; j < col_sums.size(); ++j)
    if (!(col_sums(j) > 0.0)) isolated.push_back(j);
  if (!isolated.empty()) {
    std::ostringstream os;
    os << "landmark_normalize: " << isolated.size() << " point(s) beyond epsilon of every landmark (indices";
    for (std::size_t i = 0; i < isolated.size() && i < 10; ++i) os << ' ' << isolated[i];
    if (isolated.size() > 10) os << " ...";
    os << "); raise epsilon, or sigma if the kernel underflows";
    fail(ErrorKind::IsolatedPoint, os.str());
  }
  Matrix e = v * col_sums.cwiseInverse().asDiagonal();
  const Vector row_sums = e.rowwise().sum();
  for (Index i = 0; i < e.rows(); ++i) {
    if (row_sums(i) > 0.0) {
      e.row(i) /= std::sqrt(row_sums(i));
    } else {
      e.row(i).setZero();
      raise_flag(flags, "landmark-without-support:" + std::to_string(i));
    }
  }
  return e;
}

AffinityMatrix landmark_normalize(const Matrix& v, Flags* flags) {
  const Matrix z = landmark_factor(v, flags);
  Matrix f = z.transpose() * z;
  f.triangularView<Eigen::StrictlyUpper>() = f.transpose().triangularView<Eigen::StrictlyUpper>();
  return {std::move(f), AffinityRole::F};
}

}  // namespace hsc
