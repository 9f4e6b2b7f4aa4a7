#pragma once

#include <cstdint>
#include <vector>

#include "hsc/geometry.hpp"
#include "hsc/rng.hpp"
#include "hsc/types.hpp"

namespace hsc {

enum class Metric { Euclidean, PoincareDisc };

const char* to_string(Metric metric);

struct KMeansConfig {
  int k = 2;
  int n_init = 10;
  int max_iter = 300;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  Metric metric = Metric::Euclidean;

  void validate() const;
};

struct Clustering {
  Labels labels;
  Matrix centroids;                    // k x d
  double inertia = 0.0;                // sum of squared metric distances to the assigned centroid
  int iterations_run = 0;
  int best_restart = 0;
  std::vector<double> inertia_history; // inertia after each assignment step of the kept restart
};

/// Squared distance under `metric`; for PoincareDisc both points must lie in the ball.
double squared_metric_distance(const Vector& a, const Vector& b, Metric metric);

/// k-means++ seeding: first centre uniform, later ones with probability
/// proportional to the squared metric distance to the closest chosen centre.
/// Returns the row indices of the chosen points.
std::vector<Index> kmeans_pp_seed(const Matrix& points, int k, Metric metric, Rng& rng);

/// Lloyd iterations from k-means++ seeds, best of n_init restarts by inertia
/// (ties go to the lower restart index). Centroids are arithmetic means under
/// Euclidean and Fréchet means under PoincareDisc. A cluster that empties is
/// re-seeded with the point farthest from its centroid. Stops when the largest
/// centroid move is below tol.
Clustering kmeans(const Matrix& points, const KMeansConfig& cfg);

}  // namespace hsc
