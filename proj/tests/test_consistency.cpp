#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hsc/consistency.hpp"
#include "hsc/error.hpp"
#include "hsc/rng.hpp"
#include "oracles.hpp"

using hsc::DominationKernel;
using hsc::SignalProfile;

TEST_CASE("kernel domination holds for both kernels") {
  for (int dim : {2, 5}) {
    for (double a : {0.5, 2.0}) {
      for (auto kind : {DominationKernel::Gaussian, DominationKernel::Poisson}) {
        const auto rep = hsc::check_kernel_domination(dim, 20000, a, kind, 7);
        CHECK(rep.passed);
        CHECK(rep.violations == 0);
        CHECK(rep.samples > 0);
      }
    }
  }
  // the Poisson bound is only claimed for r <= 1
  const auto p = hsc::check_kernel_domination(2, 20000, 1.0, DominationKernel::Poisson, 3);
  CHECK(p.statistics.at("pairs_checked") <= p.statistics.at("pairs_drawn"));
}

TEST_CASE("reversed inequality is caught") {
  const auto rep = hsc::check_kernel_domination(2, 5000, 1.0, DominationKernel::Gaussian, 7, true);
  CHECK(!rep.passed);
  CHECK(rep.violations > 0);
}

TEST_CASE("domination check is reproducible") {
  const auto a = hsc::check_kernel_domination(3, 5000, 1.0, DominationKernel::Gaussian, 99);
  const auto b = hsc::check_kernel_domination(3, 5000, 1.0, DominationKernel::Gaussian, 99);
  CHECK(a.statistics == b.statistics);
  CHECK_THROWS_AS(hsc::check_kernel_domination(0, 10, 1.0, DominationKernel::Gaussian, 1), hsc::Error);
  CHECK_THROWS_AS(hsc::check_kernel_domination(2, 10, -1.0, DominationKernel::Gaussian, 1), hsc::Error);
}

TEST_CASE("L1 bound") {
  for (int dim : {2, 3, 5}) {
    const auto rep = hsc::check_l1_bound(dim, 100000, 1.0, 5);
    CHECK(rep.passed);
    CHECK(rep.statistics.at("bound") == doctest::Approx(std::pow(std::numbers::pi, dim / 2.0)));
    CHECK(rep.statistics.at("estimate") < rep.statistics.at("bound"));
  }
}

TEST_CASE("transform of a Euclidean Gaussian matches the closed form") {
  // exp(-a r^2) has transform (pi/a) exp(-w^2 / (4a)) in two dimensions
  const double a = 1.0;
  const auto g = hsc::fourier_grid(128, 6.0, a, SignalProfile::EuclideanGaussian);
  CHECK(g.spacing == doctest::Approx(12.0 / 128));
  CHECK(g.frequency_step == doctest::Approx(2 * std::numbers::pi / 12.0));
  for (auto [p, q] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{3, 4}, std::pair{-5, 2}, std::pair{0, -7}}) {
    const double w2 = (p * p + q * q) * g.frequency_step * g.frequency_step;
    const double expected = std::numbers::pi / a * std::exp(-w2 / (4 * a));
    CHECK(g.magnitude(p, q) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("transform of the constant patch") {
  const auto g = hsc::fourier_grid(64, 1.5, 1.0, SignalProfile::Constant);
  CHECK(g.magnitude(0, 0) == doctest::Approx(9.0));
  CHECK(g.magnitude(1, 0) < 1e-9);
  CHECK_THROWS_AS(hsc::fourier_grid(63, 1.0, 1.0, SignalProfile::Constant), hsc::Error);
}

TEST_CASE("hyperbolic profile") {
  const auto g = hsc::fourier_grid(64, 1.2, 1.0, SignalProfile::HyperbolicGaussian);
  const int n = g.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = (i - (n - 1) / 2.0) * g.spacing, y = (j - (n - 1) / 2.0) * g.spacing;
      const double r = std::hypot(x, y);
      if (r <= 1.0 - hsc::kTruncationMargin) {
        Eigen::VectorXd v(2), z = Eigen::VectorXd::Zero(2);
        v << x, y;
        const double d = oracle::disc_distance(v, z);
        CHECK(g.signal(i, j) == doctest::Approx(std::exp(-d * d)).epsilon(1e-12));
      } else {
        CHECK(g.signal(i, j) == 0.0);
      }
    }
}

TEST_CASE("refining the grid keeps the transform") {
  const auto coarse = hsc::fourier_grid(128, 1.2, 1.0, SignalProfile::HyperbolicGaussian);
  const auto fine = hsc::fourier_grid(256, 1.2, 1.0, SignalProfile::HyperbolicGaussian);
  for (auto [p, q] : {std::pair{0, 0}, std::pair{1, 1}, std::pair{2, 3}})
    CHECK(fine.magnitude(p, q) == doctest::Approx(coarse.magnitude(p, q)).epsilon(1e-3));
}

TEST_CASE("radial symmetry of the transform") {
  const auto rep = hsc::check_radial_ft(128, 1.2, 1.0, 10, 3);
  CHECK(rep.statistics.at("groups_tested") >= 1);
  CHECK(rep.passed);
  CHECK_THROWS_AS(hsc::check_radial_ft(32, 1.2, 1.0, 10, 3), hsc::Error);
}

TEST_CASE("decay of the transform") {
  const auto hyp = hsc::check_ft_decay(128, 1.2, 1.0, 3);
  CHECK(hyp.statistics.at("decay_l") > 0);
  const auto euc = hsc::check_ft_decay(128, 6.0, 1.0, 3, SignalProfile::EuclideanGaussian);
  CHECK(euc.statistics.at("decay_l") > 0);
  const auto flat = hsc::check_ft_decay(128, 1.2, 1.0, 3, SignalProfile::Constant);
  CHECK(!flat.passed);
}

TEST_CASE("sampled disc points") {
  for (auto dist : {hsc::SampleDistribution::BlobMixture, hsc::SampleDistribution::UniformH}) {
    const auto p = hsc::sample_disc(dist, 500, 2, 4);
    CHECK(p.rows() == 500);
    CHECK((p.rowwise().norm().array() <= 1.0 - hsc::kTruncationMargin + 1e-12).all());
    CHECK(p == hsc::sample_disc(dist, 500, 2, 4));
  }
}

TEST_CASE("Lanczos agrees with a dense oracle") {
  hsc::Rng rng(8);
  const int n = 120;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal();
  const auto [values, vectors] = oracle::jacobi_eigen(a);
  const Eigen::VectorXd top = hsc::lanczos_largest(a, 5, 1);
  REQUIRE(top.size() == 5);
  for (int j = 0; j < 5; ++j) CHECK(top(j) == doctest::Approx(values(n - 1 - j)).epsilon(1e-9));
}

TEST_CASE("normalized Laplacian spectrum") {
  const auto p = hsc::sample_disc(hsc::SampleDistribution::BlobMixture, 300, 2, 6);
  const Eigen::VectorXd lam = hsc::normalized_laplacian_spectrum(p, 1.0, 5, 2);
  REQUIRE(lam.size() == 5);
  CHECK(std::abs(lam(0)) < 1e-9);
  for (int j = 1; j < 5; ++j) CHECK(lam(j) >= lam(j - 1) - 1e-12);
  CHECK(lam(4) <= 2.0);
  // the dense path below the Lanczos threshold agrees with it above
  const auto small = hsc::sample_disc(hsc::SampleDistribution::BlobMixture, 150, 2, 6);
  const Eigen::VectorXd a = hsc::normalized_laplacian_spectrum(small, 1.0, 3, 2);
  CHECK(std::abs(a(0)) < 1e-9);
}

TEST_CASE("convergence rate configuration") {
  hsc::RateConfig cfg;
  cfg.ns = {100, 200};
  CHECK_THROWS_AS(hsc::check_convergence_rate(cfg), hsc::Error);
  cfg.ns = {100, 200, 400, 800};
  cfg.trials = 3;
  CHECK_THROWS_AS(hsc::check_convergence_rate(cfg), hsc::Error);
  cfg.trials = 5;
  cfg.ns = {200, 100, 400, 800};
  CHECK_THROWS_AS(hsc::check_convergence_rate(cfg), hsc::Error);
}

TEST_CASE("small convergence rate run") {
  hsc::RateConfig cfg;
  cfg.ns = {40, 80, 160, 320};
  cfg.trials = 5;
  cfg.reference_factor = 4;
  const auto rep = hsc::check_convergence_rate(cfg);
  CHECK(rep.check_name == "rate");
  CHECK(std::isfinite(rep.statistics.at("slope")));
  CHECK(rep.statistics.at("deviation_n40") > 0);
  CHECK(rep.passed == (rep.statistics.at("slope") <= -0.35));
}
