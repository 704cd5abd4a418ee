#pragma once

// Minimum-norm point of the convex hull of an implicitly given atom set,
// by Wolfe's algorithm: a fully corrective Frank-Wolfe method whose linear
// oracle returns the atom minimizing <atom, x>.

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace kyfan {

struct Atom {
  Eigen::VectorXd point;
  int id = -1;
};

struct MinNormResult {
  Eigen::VectorXd point;         // current min-norm estimate
  std::vector<int> ids;          // active atoms
  std::vector<double> weights;   // convex weights, same order as ids
  double gap = 0.0;              // ||x||^2 - <x, v> at termination
  double distance_lower = 0.0;   // certified lower bound on the true min norm
  int iterations = 0;
  bool converged = false;
};

struct MinNormOptions {
  double target_norm = 0.0;  // stop once ||x|| <= target_norm
  double gap_tol = 1e-18;    // stop once the Frank-Wolfe gap is below this
  double relative_gap = 1e-9;  // stop once ||x|| - distance_lower <= relative_gap * ||x||
  int max_iterations = 10000;
};

using LinearOracle = std::function<Atom(const Eigen::VectorXd& direction)>;

MinNormResult min_norm_point(const Atom& start, const LinearOracle& oracle,
                             const MinNormOptions& options);

}  // namespace kyfan
