#include "hsc/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "hsc/affinity.hpp"
#include "hsc/error.hpp"
#include "hsc/geometry.hpp"
#include "hsc/rng.hpp"

namespace hsc {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 0.0;
  return f;
}

double origin_distance(double r) { return 2.0 * std::atanh(r); }

double ball_volume(int dim, double radius) {
  return std::pow(std::numbers::pi, dim / 2.0) / std::tgamma(dim / 2.0 + 1.0) * std::pow(radius, dim);
}

}  // namespace

ConsistencyReport check_kernel_domination(int dim, std::int64_t n_pairs, double a, DominationKernel kind,
                                          std::uint64_t seed, bool swapped) {
  if (dim < 1) fail(ErrorKind::InvalidInput, "check_kernel_domination: dim must be >= 1");
  if (n_pairs < 1) fail(ErrorKind::InvalidInput, "check_kernel_domination: n_pairs must be >= 1");
  if (!(a > 0.0)) fail(ErrorKind::InvalidInput, "check_kernel_domination: a must be positive");
  ConsistencyReport rep;
  rep.check_name = std::string("lemma51-") + (kind == DominationKernel::Gaussian ? "gaussian" : "poisson") +
                   (swapped ? "-swapped" : "");
  rep.seed = seed;
  Rng rng(seed);
  const double radius = 1.0 - kTruncationMargin;
  std::int64_t checked = 0;
  double worst_gap = -std::numeric_limits<double>::infinity();  // max of log(hyperbolic) - log(euclidean)
  for (std::int64_t i = 0; i < n_pairs; ++i) {
    const Vector x = rng.uniform_in_ball(dim, radius);
    const Vector y = rng.uniform_in_ball(dim, radius);
    const double r = (x - y).norm();
    const double d = dist_disc(x, y);
    double log_hyp = 0.0, log_euc = 0.0;
    if (kind == DominationKernel::Gaussian) {
      log_hyp = -a * d * d;
      log_euc = -a * r * r;
    } else {
      if (r > 1.0) continue;
      log_hyp = -a * d;
      log_euc = -0.5 * a * r * r;
    }
    ++checked;
    const double hyp = std::exp(log_hyp);
    const double euc = std::exp(log_euc);
    worst_gap = std::max(worst_gap, log_hyp - log_euc);
    if (swapped ? euc > hyp : hyp > euc) ++rep.violations;
  }
  rep.samples = checked;
  rep.statistics["dim"] = dim;
  rep.statistics["a"] = a;
  rep.statistics["pairs_drawn"] = static_cast<double>(n_pairs);
  rep.statistics["pairs_checked"] = static_cast<double>(checked);
  rep.statistics["max_log_kernel_gap"] = checked > 0 ? worst_gap : 0.0;
  rep.passed = rep.violations == 0;
  return rep;
}

ConsistencyReport check_l1_bound(int dim, std::int64_t n_samples, double a, std::uint64_t seed) {
  if (dim < 1 || dim > 10) fail(ErrorKind::InvalidInput, "check_l1_bound: dim must be in [1, 10]");
  if (n_samples < 2) fail(ErrorKind::InvalidInput, "check_l1_bound: n_samples must be >= 2");
  if (!(a > 0.0)) fail(ErrorKind::InvalidInput, "check_l1_bound: a must be positive");
  Rng rng(seed);
  const double radius = 1.0 - kTruncationMargin;
  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const double d = origin_distance(rng.uniform_in_ball(dim, radius).norm());
    const double f = std::exp(-a * d * d);
    sum += f;
    sum_sq += f * f;
  }
  const auto n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  const double volume = ball_volume(dim, radius);
  const double estimate = volume * mean;
  const double se = volume * std::sqrt(var / n);
  const double bound = std::pow(std::numbers::pi / a, dim / 2.0);

  ConsistencyReport rep;
  rep.check_name = "lemma52";
  rep.seed = seed;
  rep.samples = n_samples;
  rep.statistics["dim"] = dim;
  rep.statistics["a"] = a;
  rep.statistics["estimate"] = estimate;
  rep.statistics["standard_error"] = se;
  rep.statistics["bound"] = bound;
  rep.statistics["volume"] = volume;
  rep.passed = estimate + 3.0 * se <= bound;
  rep.violations = rep.passed ? 0 : 1;
  return rep;
}

FourierGrid fourier_grid(int grid_size, double extent, double a, SignalProfile profile) {
  if (grid_size < 8 || grid_size % 2 != 0) fail(ErrorKind::InvalidInput, "fourier_grid: grid_size must be even and >= 8");
  if (!(extent > 0.0)) fail(ErrorKind::InvalidInput, "fourier_grid: extent must be positive");
  if (!(a > 0.0)) fail(ErrorKind::InvalidInput, "fourier_grid: a must be positive");
  FourierGrid g;
  g.n = grid_size;
  g.extent = extent;
  g.spacing = 2.0 * extent / grid_size;
  g.frequency_step = 2.0 * std::numbers::pi / (grid_size * g.spacing);
  const int n = grid_size;
  Vector coord(n);
  for (int j = 0; j < n; ++j) coord(j) = (j - (n - 1) / 2.0) * g.spacing;

  g.signal.resize(n, n);
  const double radius = 1.0 - kTruncationMargin;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r = std::hypot(coord(i), coord(j));
      double v = 0.0;
      switch (profile) {
        case SignalProfile::HyperbolicGaussian:
          if (r <= radius) {
            const double d = origin_distance(r);
            v = std::exp(-a * d * d);
          }
          break;
        case SignalProfile::EuclideanGaussian: v = std::exp(-a * r * r); break;
        case SignalProfile::Constant: v = 1.0; break;
      }
      g.signal(i, j) = v;
    }

  // separable transform: E(p, j) = exp(-i w_p x_j)
  Eigen::MatrixXcd e(n, n);
  for (int p = 0; p < n; ++p) {
    const double w = (p - n / 2) * g.frequency_step;
    for (int j = 0; j < n; ++j) e(p, j) = std::polar(1.0, -w * coord(j));
  }
  const Eigen::MatrixXcd half = e * g.signal.cast<std::complex<double>>();
  g.transform = (half * e.transpose()) * (g.spacing * g.spacing);
  return g;
}

ConsistencyReport check_radial_ft(int grid_size, double extent, double a, int n_rotations, std::uint64_t seed,
                                  SignalProfile profile) {
  if (grid_size < 64) fail(ErrorKind::InvalidInput, "check_radial_ft: grid_size must be >= 64");
  if (extent < 1.0) fail(ErrorKind::InvalidInput, "check_radial_ft: extent must cover the unit disc");
  if (n_rotations < 1) fail(ErrorKind::InvalidInput, "check_radial_ft: n_rotations must be >= 1");
  const FourierGrid g = fourier_grid(grid_size, extent, a, profile);
  const int half = grid_size / 2;
  const double peak = g.transform.cwiseAbs().maxCoeff();
  const double floor = 1e-6 * peak;

  // canonical pairs p >= q >= 0 grouped by p^2 + q^2
  std::map<int, std::vector<std::pair<int, int>>> by_modulus;
  for (int p = 0; p < half; ++p)
    for (int q = 0; q <= p; ++q) by_modulus[p * p + q * q].emplace_back(p, q);

  std::vector<std::vector<std::pair<int, int>>> eligible;
  for (const auto& [mod, pairs] : by_modulus) {
    if (pairs.size() < 2) continue;
    bool strong = true;
    for (const auto& [p, q] : pairs) strong = strong && g.magnitude(p, q) > floor;
    if (strong) eligible.push_back(pairs);
  }

  Rng rng(seed);
  for (std::size_t i = eligible.size(); i > 1; --i) std::swap(eligible[i - 1], eligible[rng.index(i)]);
  const std::size_t tested = std::min<std::size_t>(eligible.size(), static_cast<std::size_t>(n_rotations));

  ConsistencyReport rep;
  rep.check_name = "lemma53";
  rep.seed = seed;
  double worst = 0.0;
  int worst_modulus = 0;
  for (std::size_t gi = 0; gi < tested; ++gi) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& [p, q] : eligible[gi]) {
      // every sign and order variant of the pair has the same modulus
      for (const auto& [u, v] : {std::pair{p, q}, std::pair{q, p}})
        for (int su : {1, -1})
          for (int sv : {1, -1}) {
            const int pu = su * u, pv = sv * v;
            if (pu < -half || pu >= half || pv < -half || pv >= half) continue;
            const double m = g.magnitude(pu, pv);
            lo = std::min(lo, m);
            hi = std::max(hi, m);
          }
    }
    const double disc = (hi - lo) / hi;
    if (disc > worst) {
      worst = disc;
      worst_modulus = eligible[gi].front().first * eligible[gi].front().first +
                      eligible[gi].front().second * eligible[gi].front().second;
    }
    if (disc > 1e-2) ++rep.violations;
  }
  rep.samples = static_cast<std::int64_t>(tested);
  rep.statistics["grid_size"] = grid_size;
  rep.statistics["extent"] = extent;
  rep.statistics["a"] = a;
  rep.statistics["groups_available"] = static_cast<double>(eligible.size());
  rep.statistics["groups_tested"] = static_cast<double>(tested);
  rep.statistics["max_discrepancy"] = worst;
  rep.statistics["worst_squared_index_modulus"] = worst_modulus;
  rep.passed = tested > 0 && rep.violations == 0;
  return rep;
}

ConsistencyReport check_ft_decay(int grid_size, double extent, double a, std::uint64_t seed, SignalProfile profile) {
  if (grid_size < 64) fail(ErrorKind::InvalidInput, "check_ft_decay: grid_size must be >= 64");
  if (extent < 1.0) fail(ErrorKind::InvalidInput, "check_ft_decay: extent must cover the unit disc");
  const FourierGrid g = fourier_grid(grid_size, extent, a, profile);
  const int half = grid_size / 2;

  // shell averages of |F| by rounded |w| / frequency_step
  std::vector<double> mag_sum(static_cast<std::size_t>(half), 0.0), w_sum(static_cast<std::size_t>(half), 0.0);
  std::vector<int> count(static_cast<std::size_t>(half), 0);
  for (int p = -half; p < half; ++p)
    for (int q = -half; q < half; ++q) {
      const double rho = std::hypot(p, q);
      const auto shell = static_cast<std::size_t>(std::lround(rho));
      if (shell >= static_cast<std::size_t>(half)) continue;
      mag_sum[shell] += g.magnitude(p, q);
      w_sum[shell] += rho * g.frequency_step;
      ++count[shell];
    }
  const double peak = mag_sum[0] / count[0];
  std::vector<double> xs, ys;
  for (std::size_t s = 0; s < mag_sum.size(); ++s) {
    const double mean = mag_sum[s] / count[s];
    if (!(mean > 1e-12 * peak)) break;
    xs.push_back(w_sum[s] / count[s]);
    ys.push_back(std::log(mean));
  }

  ConsistencyReport rep;
  rep.check_name = "lemma54";
  rep.seed = seed;
  rep.samples = static_cast<std::int64_t>(xs.size());
  rep.statistics["grid_size"] = grid_size;
  rep.statistics["extent"] = extent;
  rep.statistics["a"] = a;
  rep.statistics["band_shells"] = static_cast<double>(xs.size());
  rep.statistics["band_max_frequency"] = xs.empty() ? 0.0 : xs.back();
  double l = 0.0, c = peak, r2 = 0.0;
  if (xs.size() >= 3) {
    const LineFit f = fit_line(xs, ys);
    l = -f.slope;
    c = std::exp(f.intercept);
    r2 = f.r2;
  }
  rep.statistics["decay_l"] = l;
  rep.statistics["constant_c"] = c;
  rep.statistics["r2"] = r2;
  rep.passed = l > 0.0 && r2 >= 0.9;
  rep.violations = rep.passed ? 0 : 1;
  return rep;
}

Matrix sample_disc(SampleDistribution distribution, Index n, int dim, std::uint64_t seed) {
  if (n < 1 || dim < 2) fail(ErrorKind::InvalidInput, "sample_disc: need n >= 1 and dim >= 2");
  Rng rng(seed);
  Matrix out(n, dim);
  for (Index i = 0; i < n; ++i) {
    if (distribution == SampleDistribution::UniformH) {
      out.row(i) = rng.uniform_in_ball(dim, 1.0 - kTruncationMargin).transpose();
    } else {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(rng.index(3)) / 3.0;
      Vector x = 0.4 * rng.normal_vector(dim);
      x(0) += std::cos(angle);
      x(1) += std::sin(angle);
      out.row(i) = embed_to_disc(x, 1.0).transpose();
    }
  }
  return out;
}

Vector lanczos_largest(const Matrix& a, int count, std::uint64_t seed, double tol, int max_iter) {
  const Index n = a.rows();
  if (a.cols() != n) fail(ErrorKind::InvalidInput, "lanczos_largest: matrix must be square");
  if (count < 1 || count > n) fail(ErrorKind::InvalidInput, "lanczos_largest: need 1 <= count <= N");
  auto dense = [&] {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return Vector(es.eigenvalues().reverse().head(count));
  };
  if (n <= 200) return dense();

  const int steps = static_cast<int>(std::min<Index>(n, max_iter));
  Matrix q(n, steps);
  std::vector<double> alpha, beta;
  Rng rng(seed);
  Vector v = rng.normal_vector(n).normalized();
  Vector ritz;
  for (int j = 0; j < steps; ++j) {
    q.col(j) = v;
    Vector w = a * v;
    alpha.push_back(v.dot(w));
    // full reorthogonalisation, applied twice
    for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
    const double b = w.norm();

    const int m = j + 1;
    if (m >= count && (m % 5 == 0 || b < 1e-12 || m == steps)) {
      Matrix t = Matrix::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(t);
      bool done = true;
      for (int i = 0; i < count; ++i) {
        const Index c = m - 1 - i;
        const double residual = b * std::abs(es.eigenvectors()(m - 1, c));
        if (residual > tol * std::max(1.0, std::abs(es.eigenvalues()(c)))) done = false;
      }
      ritz = es.eigenvalues().reverse().head(count);
      if (done) return ritz;
    }
    if (b < 1e-12) return dense();  // invariant subspace smaller than requested
    beta.push_back(b);
    v = w / b;
  }
  fail(ErrorKind::NumericalDegeneracy, "lanczos_largest: no convergence within " + std::to_string(steps) + " steps");
}

Vector normalized_laplacian_spectrum(const Matrix& disc_points, double a, int k, std::uint64_t seed) {
  KernelSpec spec;
  spec.kind = KernelKind::GaussianHyperbolic;
  spec.sigma = 1.0 / std::sqrt(a);
  Matrix m = build_affinity(disc_points, spec).entries;
  const Vector inv_sqrt = m.rowwise().sum().cwiseSqrt().cwiseInverse();
  m.array().colwise() *= inv_sqrt.array();
  m.array().rowwise() *= inv_sqrt.transpose().array();
  const Vector mu = lanczos_largest(m, k, seed);
  return (1.0 - mu.array()).matrix();
}

ConsistencyReport check_convergence_rate(const RateConfig& cfg) {
  if (cfg.ns.size() < 4) fail(ErrorKind::InvalidInput, "check_convergence_rate: need at least 4 sample sizes");
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    if (cfg.ns[i] < 2 * cfg.k) fail(ErrorKind::InvalidInput, "check_convergence_rate: sample sizes must be >= 2k");
    if (i > 0 && cfg.ns[i] <= cfg.ns[i - 1]) fail(ErrorKind::InvalidInput, "check_convergence_rate: sample sizes must ascend");
  }
  if (cfg.trials < 5) fail(ErrorKind::InvalidInput, "check_convergence_rate: need at least 5 trials");
  if (cfg.k < 1) fail(ErrorKind::InvalidInput, "check_convergence_rate: k must be >= 1");
  if (!(cfg.a > 0.0)) fail(ErrorKind::InvalidInput, "check_convergence_rate: a must be positive");
  if (cfg.reference_factor < 1) fail(ErrorKind::InvalidInput, "check_convergence_rate: reference_factor must be >= 1");

  ConsistencyReport rep;
  rep.check_name = "rate";
  rep.seed = cfg.seed;

  const Index n_ref = cfg.ns.back() * cfg.reference_factor;
  Vector reference;
  {
    const Matrix pts = sample_disc(cfg.distribution, n_ref, cfg.dim, derive_seed(cfg.seed, 0));
    reference = normalized_laplacian_spectrum(pts, cfg.a, cfg.k, derive_seed(cfg.seed, 1));
  }
  std::vector<double> log_n, log_dev;
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    const std::uint64_t size_seed = derive_seed(cfg.seed, 100 + i);
    double total = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      const std::uint64_t trial_seed = derive_seed(size_seed, static_cast<std::uint64_t>(t));
      const Matrix pts = sample_disc(cfg.distribution, cfg.ns[i], cfg.dim, trial_seed);
      const Vector lam = normalized_laplacian_spectrum(pts, cfg.a, cfg.k, derive_seed(trial_seed, 1));
      total += (lam - reference).cwiseAbs().maxCoeff();
      ++rep.samples;
    }
    const double dev = total / cfg.trials;
    rep.statistics["deviation_n" + std::to_string(cfg.ns[i])] = dev;
    log_n.push_back(std::log(static_cast<double>(cfg.ns[i])));
    log_dev.push_back(std::log(dev));
  }
  const LineFit f = fit_line(log_n, log_dev);
  for (int j = 0; j < cfg.k; ++j) rep.statistics["reference_lambda" + std::to_string(j + 1)] = reference(j);
  rep.statistics["reference_size"] = static_cast<double>(n_ref);
  rep.statistics["slope"] = f.slope;
  rep.statistics["intercept"] = f.intercept;
  rep.statistics["r2"] = f.r2;
  rep.statistics["trials"] = cfg.trials;
  rep.statistics["k"] = cfg.k;
  rep.statistics["a"] = cfg.a;
  rep.passed = std::isfinite(f.slope) && f.slope <= -0.35;
  rep.violations = rep.passed ? 0 : 1;
  return rep;
}

}  // namespace hsc
