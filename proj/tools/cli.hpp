#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hsc::cli {

/// Runs the command line tool on argv-style arguments (args[0] is the program name)
/// and returns the process exit code: 0 success, 1 failed check, 2 invalid flags,
/// 3 data errors, 4 numerical degeneracy.
int run(const std::vector<std::string>& args);

/// Deterministic SVG scatter plot. Points with more than two columns are
/// projected on their first two principal components.
std::string scatter_svg(const Eigen::MatrixXd& points, const std::vector<int>& labels, const std::string& title);

}  // namespace hsc::cli
