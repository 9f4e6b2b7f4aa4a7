#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hsc::cli::run(args);
}
