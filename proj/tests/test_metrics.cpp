#include "doctest.h"

#include <cmath>

#include "hsc/metrics.hpp"
#include "hsc/rng.hpp"
#include "oracles.hpp"

using hsc::Labels;
using hsc::Matrix;
using hsc::Metric;

TEST_CASE("ari") {
  CHECK(hsc::ari({0, 0, 1, 1}, {0, 0, 1, 1}) == 1.0);
  CHECK(hsc::ari({0, 0, 1, 1}, {1, 1, 0, 0}) == 1.0);
  CHECK(hsc::ari({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(hsc::ari({0, 0, 0, 0}, {0, 0, 0, 0}) == 1.0);
  CHECK_THROWS_AS(hsc::ari({0, 1}, {0, 1, 1}), hsc::Error);
}

TEST_CASE("nmi") {
  CHECK(hsc::nmi({0, 0, 1, 1, 2}, {5, 5, 7, 7, 9}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(hsc::nmi({0, 0, 1, 1}, {0, 1, 0, 1})) < 1e-15);
  CHECK(hsc::nmi({0, 0, 0, 0}, {0, 1, 0, 1}) == 0.0);
  CHECK_THROWS_AS(hsc::nmi({0}, {0}), hsc::Error);
}

TEST_CASE("ari and nmi agree with exhaustive oracles") {
  for (int n = 2; n <= 6; ++n) {
    const auto all = oracle::all_labelings(n, 3);
    for (std::size_t i = 0; i < all.size(); i += 3)
      for (std::size_t j = 0; j < all.size(); j += 5) {
        CHECK(std::abs(hsc::ari(all[i], all[j]) - oracle::ari_pairs(all[i], all[j])) <= 1e-12);
        CHECK(std::abs(hsc::nmi(all[i], all[j]) - oracle::nmi_entropy(all[i], all[j])) <= 1e-12);
        CHECK(hsc::ari(all[i], all[j]) == doctest::Approx(hsc::ari(all[j], all[i])).epsilon(1e-14));
      }
  }
}

TEST_CASE("label permutations leave ari and nmi unchanged") {
  hsc::Rng rng(41);
  for (int t = 0; t < 50; ++t) {
    Labels a(20), b(20);
    for (auto& x : a) x = static_cast<int>(rng.index(4));
    for (auto& x : b) x = static_cast<int>(rng.index(3));
    Labels pa = a;
    for (auto& x : pa) x = (x * 3 + 1) % 4 + 10;
    CHECK(hsc::ari(pa, b) == doctest::Approx(hsc::ari(a, b)).epsilon(1e-13));
    CHECK(hsc::nmi(pa, b) == doctest::Approx(hsc::nmi(a, b)).epsilon(1e-13));
    const double n = hsc::nmi(a, b);
    CHECK((n >= 0.0 && n <= 1.0));
  }
}

TEST_CASE("silhouette") {
  Matrix p(4, 1);
  p << 0, 0.1, 10, 10.1;
  const double s0 = 1.0 - 0.1 / 10.05, s1 = 1.0 - 0.1 / 9.95;
  CHECK(hsc::silhouette(p, {0, 0, 1, 1}, Metric::Euclidean) == doctest::Approx((s0 + s1) / 2).epsilon(1e-14));
  CHECK(hsc::silhouette(p, {0, 0, 1, 1}, Metric::Euclidean) == doctest::Approx(0.99).epsilon(1e-4));

  Matrix mixed(4, 1);
  mixed << 1, 1, 2, 2;
  CHECK(hsc::silhouette(mixed, {0, 1, 0, 1}, Metric::Euclidean) == doctest::Approx(-0.5));

  Matrix single(3, 1);
  single << 0, 1, 5;
  // the singleton contributes 0
  const double s = hsc::silhouette(single, {0, 0, 1}, Metric::Euclidean);
  CHECK(s == doctest::Approx((1.0 - 1.0 / 5.0 + 1.0 - 1.0 / 4.0) / 3.0));
  CHECK_THROWS_AS(hsc::silhouette(p, {0, 0, 0, 0}, Metric::Euclidean), hsc::Error);
}

TEST_CASE("davies_bouldin") {
  Matrix p(4, 1);
  p << 0, 1, 4, 6;
  CHECK(hsc::davies_bouldin(p, {0, 0, 1, 1}, Metric::Euclidean) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(hsc::davies_bouldin(p, {1, 1, 0, 0}, Metric::Euclidean) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  Matrix tight(4, 1);
  tight << 0, 1e-6, 100, 100 + 1e-6;
  CHECK(hsc::davies_bouldin(tight, {0, 0, 1, 1}, Metric::Euclidean) < 1e-7);
  Matrix coincide(4, 1);
  coincide << -1, 1, -2, 2;
  try {
    hsc::davies_bouldin(coincide, {0, 0, 1, 1}, Metric::Euclidean);
    FAIL("expected a degenerate-metric error");
  } catch (const hsc::Error& e) {
    CHECK(e.kind() == hsc::ErrorKind::DegenerateMetric);
  }
}

TEST_CASE("calinski_harabasz") {
  Matrix p(4, 1);
  p << 0, 1, 4, 6;
  CHECK(hsc::calinski_harabasz(p, {0, 0, 1, 1}, Metric::Euclidean) == doctest::Approx(16.2).epsilon(1e-14));
  CHECK(hsc::calinski_harabasz(p, {3, 3, 8, 8}, Metric::Euclidean) == doctest::Approx(16.2).epsilon(1e-14));
  Matrix dup(4, 1);
  dup << 1, 1, 3, 3;
  hsc::Flags flags;
  CHECK(std::isinf(hsc::calinski_harabasz(dup, {0, 0, 1, 1}, Metric::Euclidean, &flags)));
  CHECK(flags.size() == 1);
  CHECK_THROWS_AS(hsc::calinski_harabasz(p, {0, 1, 2, 3}, Metric::Euclidean), hsc::Error);
}

TEST_CASE("hyperbolic intrinsic metrics approach Euclidean ones near the origin") {
  hsc::Rng rng(42);
  Matrix p(60, 2);
  Labels l(60);
  for (int i = 0; i < 60; ++i) {
    l[static_cast<std::size_t>(i)] = i % 3;
    const double angle = 2.0 * 3.14159265358979 * (i % 3) / 3.0;
    p(i, 0) = std::cos(angle) + 0.3 * rng.normal();
    p(i, 1) = std::sin(angle) + 0.3 * rng.normal();
  }
  const Matrix small = 1e-3 * p;
  const double se = hsc::silhouette(small, l, Metric::Euclidean);
  const double sh = hsc::silhouette(small, l, Metric::PoincareDisc);
  CHECK(std::abs(se - sh) <= 1e-3);
  const double de = hsc::davies_bouldin(small, l, Metric::Euclidean);
  CHECK(std::abs(hsc::davies_bouldin(small, l, Metric::PoincareDisc) - de) <= 1e-2 * de);
  const double ce = hsc::calinski_harabasz(small, l, Metric::Euclidean);
  CHECK(std::abs(hsc::calinski_harabasz(small, l, Metric::PoincareDisc) - ce) <= 1e-2 * ce);
}

TEST_CASE("evaluate") {
  Matrix p(4, 1);
  p << 0, 1, 4, 6;
  const hsc::EvaluationReport no_truth = hsc::evaluate(p, {0, 0, 1, 1}, nullptr, Metric::Euclidean);
  CHECK(!no_truth.ari);
  CHECK(!no_truth.nmi);
  CHECK(*no_truth.calinski_harabasz == doctest::Approx(16.2));
  const Labels truth{0, 0, 1, 1};
  const hsc::EvaluationReport r = hsc::evaluate(p, {0, 0, 1, 1}, &truth, Metric::Euclidean);
  CHECK(*r.ari == 1.0);
  CHECK(*r.nmi == doctest::Approx(1.0));
  const hsc::EvaluationReport one = hsc::evaluate(p, {0, 0, 0, 0}, &truth, Metric::Euclidean);
  CHECK(!one.silhouette);
  CHECK(*one.ari == 0.0);
}
