#include "kyfan/norms.hpp"

#include <algorithm>
#include <limits>

namespace kyfan {

namespace {

void check_k(const Matrix& a, int k) {
  const auto limit = std::min(a.rows(), a.cols());
  if (k < 1 || k > limit) throw Error(ErrorCode::kKOutOfRange, "k must lie in 1..n");
}

}  // namespace

double ky_fan_norm(const Matrix& a, int k) {
  check_k(a, k);
  return singular_values(a).head(k).sum();
}

double ky_fan_dual_norm(const Matrix& x, int k) {
  check_k(x, k);
  const RealVector s = singular_values(x);
  return std::max(s(0), s.sum() / k);
}

double fan_objective(const Matrix& a, const Matrix& u, const Matrix& v) {
  return (u.adjoint() * a * v).trace().real();
}

Matrix random_isometry(int n, int k, Rng& rng) { return random_unitary(n, rng).leftCols(k); }

double variational_norm(const Matrix& a, int k, int samples, Rng& rng) {
  check_k(a, k);
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < std::max(samples, 1); ++s) {
    const Matrix u = random_isometry(static_cast<int>(a.rows()), k, rng);
    const Matrix v = random_isometry(static_cast<int>(a.cols()), k, rng);
    // The phase of tr(U^* A V) can be absorbed into U, so |.| is attainable.
    best = std::max(best, std::abs((u.adjoint() * a * v).trace()));
  }
  return best;
}

}  // namespace kyfan
