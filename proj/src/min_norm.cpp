#include "kyfan/min_norm.hpp"

#include <algorithm>
#include <cmath>

namespace kyfan {

namespace {

// argmin ||P a|| subject to sum(a) = 1.
Eigen::VectorXd affine_minimizer(const std::vector<Eigen::VectorXd>& points) {
  const auto m = static_cast<Eigen::Index>(points.size());
  const Eigen::Index d = points.front().size();
  Eigen::MatrixXd p(d, m);
  for (Eigen::Index j = 0; j < m; ++j) p.col(j) = points[j];
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
  kkt.topLeftCorner(m, m) = p.transpose() * p;
  kkt.topRightCorner(m, 1).setOnes();
  kkt.bottomLeftCorner(1, m).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
  rhs(m) = 1.0;
  return kkt.completeOrthogonalDecomposition().solve(rhs).head(m);
}

// Removes affinely dependent points while keeping sum lambda_i p_i fixed,
// so at most dim + 1 points stay active.
void caratheodory_reduce(std::vector<Eigen::VectorXd>& points, std::vector<int>& ids,
                         std::vector<double>& lambda) {
  const Eigen::Index d = points.front().size();
  while (static_cast<Eigen::Index>(points.size()) > d + 1) {
    const auto m = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd sys(d + 1, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      sys.col(j).head(d) = points[j];
      sys(d, j) = 1.0;
    }
    const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(sys).kernel();
    Eigen::VectorXd v = kernel.col(0);
    if (v.maxCoeff() <= 0) v = -v;
    double t = INFINITY;
    Eigen::Index drop = 0;
    for (Eigen::Index j = 0; j < m; ++j)
      if (v(j) > 0 && lambda[j] / v(j) < t) t = lambda[j] / v(j), drop = j;
    for (Eigen::Index j = 0; j < m; ++j) lambda[j] = std::max(0.0, lambda[j] - t * v(j));
    points.erase(points.begin() + drop);
    ids.erase(ids.begin() + drop);
    lambda.erase(lambda.begin() + drop);
  }
}

}  // namespace

MinNormResult min_norm_point(const Atom& start, const LinearOracle& oracle,
                             const MinNormOptions& options) {
  std::vector<Eigen::VectorXd> points{start.point};
  std::vector<int> ids{start.id};
  std::vector<double> lambda{1.0};
  Eigen::VectorXd x = start.point;

  MinNormResult out;
  constexpr double kDrop = 1e-14;
  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    const double xx = x.squaredNorm();
    if (std::sqrt(xx) <= options.target_norm) {
      out.converged = true;
      break;
    }
    const Atom v = oracle(x);
    const double xv = x.dot(v.point);
    out.gap = xx - xv;
    if (xx > 0) out.distance_lower = std::max(out.distance_lower, xv / std::sqrt(xx));
    if (out.gap <= options.gap_tol ||
        std::sqrt(xx) - out.distance_lower <= options.relative_gap * std::sqrt(xx)) {
      out.converged = true;
      break;
    }
    const double scale = 1.0 + v.point.norm();
    const bool duplicate = std::any_of(points.begin(), points.end(), [&](const Eigen::VectorXd& p) {
      return (p - v.point).norm() <= 1e-13 * scale;
    });
    if (duplicate) {
      out.converged = true;
      break;
    }
    points.push_back(v.point);
    ids.push_back(v.id);
    lambda.push_back(0.0);

    for (std::size_t minor = 0; minor <= points.size() + 2; ++minor) {
      const Eigen::VectorXd alpha = affine_minimizer(points);
      if (alpha.minCoeff() > kDrop) {
        for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = alpha(static_cast<Eigen::Index>(i));
        break;
      }
      double theta = 1.0;
      std::size_t blocking = 0;
      for (std::size_t i = 0; i < lambda.size(); ++i) {
        const double a = alpha(static_cast<Eigen::Index>(i));
        if (a <= kDrop && lambda[i] - a > 0) {
          const double t = lambda[i] / (lambda[i] - a);
          if (t < theta) {
            theta = t;
            blocking = i;
          }
        }
      }
      for (std::size_t i = 0; i < lambda.size(); ++i)
        lambda[i] = theta * alpha(static_cast<Eigen::Index>(i)) + (1.0 - theta) * lambda[i];
      lambda[blocking] = 0.0;
      for (std::size_t i = lambda.size(); i-- > 0;) {
        if (lambda[i] <= kDrop && points.size() > 1) {
          points.erase(points.begin() + static_cast<std::ptrdiff_t>(i));
          ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(i));
          lambda.erase(lambda.begin() + static_cast<std::ptrdiff_t>(i));
        }
      }
      double total = 0.0;
      for (double l : lambda) total += l;
      for (double& l : lambda) l /= total;
    }
    caratheodory_reduce(points, ids, lambda);
    x.setZero();
    for (std::size_t i = 0; i < points.size(); ++i) x += lambda[i] * points[i];
  }
  out.point = x;
  out.ids = ids;
  out.weights = lambda;
  return out;
}

}  // namespace kyfan
