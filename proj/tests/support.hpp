#pragma once

// Test-side helpers: random inputs and small independent reference
// computations that do not go through the library's decision code.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "kyfan/linalg.hpp"

namespace kyfan::test {

inline Matrix diag(std::initializer_list<double> values) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

inline Matrix unit_outer(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

inline Matrix random_hermitian(int n, Rng& rng) { return herm(random_gaussian(n, n, rng)); }

/// Singular values straight from Eigen's JacobiSVD, descending.
inline RealVector reference_singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

inline double reference_ky_fan(const Matrix& m, int k) { return reference_singular_values(m).head(k).sum(); }

/// Random element of {0 <= T <= I, tr T = q}: a random convex mix of rank-q
/// projectors, which is feasible by convexity.
inline Matrix random_spectral_polytope_point(int n, int q, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix t = Matrix::Zero(n, n);
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Matrix w = random_unitary(n, rng).leftCols(q);
    const double weight = unit(rng);
    t += weight * w * w.adjoint();
    total += weight;
  }
  return t / total;
}

/// Random T with s_1(T) <= 1 and sum s_j(T) <= q: rescaled random matrix.
inline Matrix random_fan_ball_point(int rows, int cols, int q, Rng& rng) {
  Matrix t = random_gaussian(rows, cols, rng);
  const RealVector s = reference_singular_values(t);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scale = std::min(1.0 / s(0), static_cast<double>(q) / s.sum());
  return unit(rng) * scale * t;
}

}  // namespace kyfan::test
