#pragma once

#include <optional>

#include "hsc/error.hpp"
#include "hsc/kmeans.hpp"
#include "hsc/types.hpp"

namespace hsc {

/// Adjusted Rand index by pair counting. 1 for identical partitions up to relabeling.
double ari(const Labels& a, const Labels& b);

/// Mutual information over the arithmetic mean of the two entropies.
/// Returns 0 when either labeling has a single cluster.
double nmi(const Labels& a, const Labels& b);

/// Full N x N distance matrix under `space`.
Matrix pairwise_distances(const Matrix& points, Metric space);

double silhouette(const Matrix& points, const Labels& labels, Metric space);
double davies_bouldin(const Matrix& points, const Labels& labels, Metric space);
/// +inf (and a "zero-within-dispersion" flag) when every cluster is a single repeated point.
double calinski_harabasz(const Matrix& points, const Labels& labels, Metric space, Flags* flags = nullptr);

struct EvaluationReport {
  std::optional<double> ari;
  std::optional<double> nmi;
  std::optional<double> silhouette;
  std::optional<double> davies_bouldin;
  std::optional<double> calinski_harabasz;
  Metric space = Metric::Euclidean;
  Flags flags;
};

/// Intrinsic metrics whenever the labeling has at least two clusters and N > k;
/// extrinsic ones only when `truth` is given. Metrics that cannot be computed stay empty
/// and leave a note in `flags`.
EvaluationReport evaluate(const Matrix& points, const Labels& labels, const Labels* truth, Metric space);

}  // namespace hsc
