#pragma once

#include "kyfan/linalg.hpp"

namespace kyfan {

/// ||A||_(k) = s_1(A) + ... + s_k(A).
double ky_fan_norm(const Matrix& a, int k);

/// Dual of the Ky Fan k-norm: max(s_1(X), ||X||_1 / k).
double ky_fan_dual_norm(const Matrix& x, int k);

/// Re tr(U^* A V) for isometries U, V with k columns; the Fan objective.
double fan_objective(const Matrix& a, const Matrix& u, const Matrix& v);

/// Largest Fan objective over `samples` random k-column isometry pairs. A lower
/// bound on ||A||_(k); only meant for cross-checks.
double variational_norm(const Matrix& a, int k, int samples, Rng& rng);

/// Random n x k isometry (first k columns of a Haar unitary).
Matrix random_isometry(int n, int k, Rng& rng);

}  // namespace kyfan
