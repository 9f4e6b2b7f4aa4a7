#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsc/error.hpp"
#include "hsc/types.hpp"

namespace hsc {

/// Tree layout behind generate_tree_blobs: the centre of every leaf and the
/// child indices taken from the root to reach it.
struct Hierarchy {
  Matrix leaf_centers;
  std::vector<std::vector<int>> paths;
};

struct EuclideanDataset {
  Matrix points;
  std::optional<Labels> labels;
  std::string name;
  std::vector<std::string> feature_names;
  std::optional<Hierarchy> hierarchy;
  int dropped_rows = 0;  // rows skipped by load_csv for missing values

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
};

/// Reads a comma-separated file with a header row. Every column except the
/// label column becomes a feature. The label column defaults to "label" when
/// present; its values may be integers or arbitrary strings (numbered in order
/// of first appearance). Rows with an empty, "NA", "NaN" or "?" feature cell
/// are dropped and counted.
EuclideanDataset load_csv(const std::string& path, const std::optional<std::string>& label_column = std::nullopt);

/// Writes points (17 significant digits) and, when present, a trailing "label" column.
void save_csv(const std::string& path, const EuclideanDataset& data);

void save_labels(const std::string& path, const Labels& labels);
Labels load_labels(const std::string& path);

/// Isotropic Gaussian blobs, n_per_cluster points around each row of `centers`.
EuclideanDataset generate_blobs(int n_per_cluster, const Matrix& centers, double spread, std::uint64_t seed);

struct TreeBlobsConfig {
  int depth = 3;
  int branching = 2;
  double scale_decay = 0.3;
  int n_leaf = 30;
  std::uint64_t seed = 0;
  int dim = 2;
  double root_scale = 1.0;
  double spread = 0.0;  // leaf noise; 0 means a quarter of the deepest offset

  void validate() const;
};

/// Leaves of a regular tree become blob centres. Children of a node sit at
/// offset root_scale * scale_decay^(level-1) from it, evenly spaced in angle
/// inside a random plane, so siblings are always closer than cousins.
EuclideanDataset generate_tree_blobs(const TreeBlobsConfig& cfg);

/// Uniform sample of n rows without replacement (reservoir sampling), original order kept.
EuclideanDataset reservoir_subsample(const EuclideanDataset& data, Index n, std::uint64_t seed);

/// Per-column standardisation; constant columns are only centred.
Matrix zscore(const Matrix& points);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace hsc
