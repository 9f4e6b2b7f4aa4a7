#pragma once

#include <vector>

#include <Eigen/Dense>

namespace hsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Cluster labels, one per input row, in input order.
using Labels = std::vector<int>;

}  // namespace hsc
