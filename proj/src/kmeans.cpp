#include "hsc/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hsc {

const char* to_string(Metric metric) {
  return metric == Metric::Euclidean ? "euclidean" : "poincare";
}

void KMeansConfig::validate() const {
  if (k < 1) fail(ErrorKind::InvalidInput, "kmeans: k must be >= 1");
  if (n_init < 1) fail(ErrorKind::InvalidInput, "kmeans: n_init must be >= 1");
  if (max_iter < 1) fail(ErrorKind::InvalidInput, "kmeans: max_iter must be >= 1");
  if (!(tol > 0.0)) fail(ErrorKind::InvalidInput, "kmeans: tol must be positive");
}

double squared_metric_distance(const Vector& a, const Vector& b, Metric metric) {
  if (metric == Metric::Euclidean) return (a - b).squaredNorm();
  const double d = dist_disc(a, b);
  return d * d;
}

namespace {

double metric_distance(const Vector& a, const Vector& b, Metric metric) {
  return metric == Metric::Euclidean ? (a - b).norm() : dist_disc(a, b);
}

// Squared distances from every row of `points` to `c`, vectorised for the Euclidean case.
Vector squared_distances_to(const Matrix& points, const Vector& c, Metric metric) {
  if (metric == Metric::Euclidean) return (points.rowwise() - c.transpose()).rowwise().squaredNorm();
  Vector out(points.rows());
  for (Index i = 0; i < points.rows(); ++i) out(i) = squared_metric_distance(points.row(i).transpose(), c, metric);
  return out;
}

Vector cluster_centre(const Matrix& points, const std::vector<Index>& members, Metric metric) {
  Matrix sub(static_cast<Index>(members.size()), points.cols());
  for (std::size_t r = 0; r < members.size(); ++r) sub.row(static_cast<Index>(r)) = points.row(members[r]);
  if (metric == Metric::Euclidean) return sub.colwise().mean().transpose();
  return frechet_mean(sub, Vector());
}

struct RunResult {
  Labels labels;
  Matrix centroids;
  double inertia = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::vector<double> history;
};

RunResult lloyd(const Matrix& points, const KMeansConfig& cfg, Rng& rng) {
  const Index n = points.rows();
  const int k = cfg.k;
  const std::vector<Index> seeds = kmeans_pp_seed(points, k, cfg.metric, rng);
  Matrix centroids(k, points.cols());
  for (int c = 0; c < k; ++c) centroids.row(c) = points.row(seeds[static_cast<std::size_t>(c)]);

  RunResult run;
  run.labels.assign(static_cast<std::size_t>(n), 0);
  Vector best_d2(n);
  for (int it = 0; it < cfg.max_iter; ++it) {
    // assignment
    best_d2.setConstant(std::numeric_limits<double>::infinity());
    for (int c = 0; c < k; ++c) {
      const Vector d2 = squared_distances_to(points, centroids.row(c).transpose(), cfg.metric);
      for (Index i = 0; i < n; ++i) {
        if (d2(i) < best_d2(i)) {
          best_d2(i) = d2(i);
          run.labels[static_cast<std::size_t>(i)] = c;
        }
      }
    }

    std::vector<std::vector<Index>> members(static_cast<std::size_t>(k));
    for (Index i = 0; i < n; ++i) members[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])].push_back(i);
    for (int c = 0; c < k; ++c) {
      if (!members[static_cast<std::size_t>(c)].empty()) continue;
      // refill from the point farthest from its centroid, taken from a cluster that can spare it
      Index far = -1;
      for (Index i = 0; i < n; ++i) {
        const auto& from = members[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])];
        if (from.size() < 2) continue;
        if (far < 0 || best_d2(i) > best_d2(far)) far = i;
      }
      if (far < 0) break;
      auto& from = members[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(far)])];
      from.erase(std::find(from.begin(), from.end(), far));
      members[static_cast<std::size_t>(c)].push_back(far);
      run.labels[static_cast<std::size_t>(far)] = c;
      best_d2(far) = 0.0;
      centroids.row(c) = points.row(far);
    }
    run.history.push_back(best_d2.sum());
    run.iterations = it + 1;

    // update
    double max_move = 0.0;
    for (int c = 0; c < k; ++c) {
      const auto& mem = members[static_cast<std::size_t>(c)];
      if (mem.empty()) continue;
      const Vector next = cluster_centre(points, mem, cfg.metric);
      max_move = std::max(max_move, metric_distance(centroids.row(c).transpose(), next, cfg.metric));
      centroids.row(c) = next.transpose();
    }
    if (max_move < cfg.tol) break;
  }

  // final inertia against the final centroids, with labels re-checked for consistency
  run.inertia = 0.0;
  for (Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int label = 0;
    for (int c = 0; c < k; ++c) {
      const double d2 = squared_metric_distance(points.row(i).transpose(), centroids.row(c).transpose(), cfg.metric);
      if (d2 < best) {
        best = d2;
        label = c;
      }
    }
    run.labels[static_cast<std::size_t>(i)] = label;
    run.inertia += best;
  }
  run.centroids = std::move(centroids);
  return run;
}

}  // namespace

std::vector<Index> kmeans_pp_seed(const Matrix& points, int k, Metric metric, Rng& rng) {
  const Index n = points.rows();
  if (k < 1 || k > n) fail(ErrorKind::InvalidInput, "kmeans_pp_seed: need 1 <= k <= N");
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  chosen.push_back(static_cast<Index>(rng.index(static_cast<std::size_t>(n))));
  Vector closest = squared_distances_to(points, points.row(chosen.back()).transpose(), metric);
  while (static_cast<int>(chosen.size()) < k) {
    const double total = closest.sum();
    Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += closest(i);
        if (acc > target && closest(i) > 0.0) {
          pick = i;
          break;
        }
      }
      while (closest(pick) <= 0.0 && pick > 0) --pick;
    } else {
      // every point coincides with a chosen centre
      pick = static_cast<Index>(rng.index(static_cast<std::size_t>(n)));
    }
    chosen.push_back(pick);
    closest = closest.cwiseMin(squared_distances_to(points, points.row(pick).transpose(), metric));
  }
  return chosen;
}

Clustering kmeans(const Matrix& points, const KMeansConfig& cfg) {
  cfg.validate();
  if (points.rows() < cfg.k) fail(ErrorKind::InvalidInput, "kmeans: fewer points than clusters");
  if (!points.allFinite()) fail(ErrorKind::InvalidInput, "kmeans: non-finite coordinates");

  RunResult best;
  int best_restart = -1;
  for (int r = 0; r < cfg.n_init; ++r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    RunResult run = lloyd(points, cfg, rng);
    if (best_restart < 0 || run.inertia < best.inertia) {
      best = std::move(run);
      best_restart = r;
    }
  }
  Clustering out;
  out.labels = std::move(best.labels);
  out.centroids = std::move(best.centroids);
  out.inertia = best.inertia;
  out.iterations_run = best.iterations;
  out.best_restart = best_restart;
  out.inertia_history = std::move(best.history);
  return out;
}

}  // namespace hsc
