#pragma once

// Brute-force referee. Everything here works from the definition
// ||A + lambda B||_(k) >= ||A||_(k) and uses only norms and linear algebra,
// never the subdifferential machinery it is meant to check.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kyfan/linalg.hpp"

namespace kyfan {

struct GridSpec {
  double radius = 0.0;  // 0: use 2 ||A||_(k) / ||B||_(k), outside of which no minimizer lies
  int coarse_points = 64;
  int refine_rounds = 4;  // Nelder-Mead runs, started from the best grid points
  std::uint64_t seed = 0;
};

struct LambdaMin {
  Complex lambda;
  double value = 0.0;
};

/// Approximate min over |lambda| <= radius of ||A + lambda B||_(k): polar grid,
/// then Nelder-Mead.
LambdaMin grid_min_norm(const Matrix& a, const Matrix& b, int k, const GridSpec& spec = {});

enum class OracleVerdict { kOrthogonal, kNotOrthogonal, kBoundary, kNoCounterexample };

std::string_view to_string(OracleVerdict v);

/// Thresholds are relative to ||A||_(k) + ||B||_(k).
OracleVerdict oracle_check_pair(const Matrix& a, const Matrix& b, int k, const GridSpec& spec = {},
                                double tol_decide = 1e-7, double tol_strict = 1e-6);

/// (||A + tX||_(k) - ||A||_(k)) / t, evaluated in extended precision.
double fd_directional(const Matrix& a, const Matrix& x, int k, double t);

/// Points sum_{i<=k} <u_i, U^* B u_i> for random orthonormal eigenvectors u_i
/// of |A| with eigenvalues s_1..s_k. Throws DegenerateRank when s_k = 0.
std::vector<Complex> sample_range_points(const Matrix& a, const Matrix& b, int k, int n_samples,
                                         Rng& rng);

/// Multistart search for coefficients with ||A + sum c_j W_j||_(k) below
/// ||A||_(k). Never returns kOrthogonal.
OracleVerdict oracle_check_subspace(const Matrix& a, std::span<const Matrix> basis, int k, int restarts,
                                    Rng& rng, double tol_strict = 1e-6);

struct ParallelProbe {
  Complex lambda;
  double value = 0.0;   // max ||A + lambda B||_(k) over the unit circle
  double margin = 0.0;  // value - ||A||_(k) - ||B||_(k), never positive up to rounding
};

/// Unit-circle grid of `points` angles, refined around the best one.
ParallelProbe oracle_parallel_grid(const Matrix& a, const Matrix& b, int k, int points = 720);

}  // namespace kyfan
