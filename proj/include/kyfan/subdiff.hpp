#pragma once

// Subdifferential of g(A) = ||A||_(k). With A = U S V^* and U = [U1:U2:U3],
// V = [V1:V2:V3] split at the multiplicity cluster of s_k, every subgradient
// is G = U1 V1^* + L T V2^*, where L = U2 and T runs over
// {0 <= T <= I, tr T = q} when s_k > 0, while L = [U2:U3] and T runs over
// {s_1(T) <= 1, sum s_j(T) <= q} when s_k = 0.

#include <optional>

#include "kyfan/linalg.hpp"

namespace kyfan {

enum class SpectralSetKind { kPsd, kGeneral };

/// Feasible set of the T parameter.
struct SpectralSetDescriptor {
  SpectralSetKind kind = SpectralSetKind::kPsd;
  int rows = 0;
  int cols = 0;
  int q = 1;
};

struct SubdifferentialFrame {
  SvdFrame svd;
  SpectralPartition part;
  Matrix U1, V1, U2, V2, U3, V3;
  bool degenerate_zero = false;
  // s_k sits within a few decades of the rank threshold
  bool rank_ambiguous = false;

  int n() const { return svd.size(); }
  int k() const { return part.k; }
  int q() const { return part.q; }
  /// U2, widened to [U2:U3] when s_k = 0.
  Matrix left_boundary() const;
  SpectralSetDescriptor spectral_set() const;
};

SubdifferentialFrame build_frame(const Matrix& a, int k, std::optional<double> cluster_tol = {});
SubdifferentialFrame build_frame(const SvdFrame& svd, int k, std::optional<double> cluster_tol = {});

/// g'_+(A, X), in closed form from Fan sums of the boundary compression.
double directional_derivative(const Matrix& a, int k, const Matrix& x);
double directional_derivative(const SubdifferentialFrame& frame, const Matrix& x);

struct SupportResult {
  double value = 0.0;
  Matrix subgradient;  // a G in the subdifferential with Re tr(G^* X) = value
  Matrix t;            // its T parameter
};

/// The directional derivative together with a maximizing subgradient.
SupportResult support_subgradient(const SubdifferentialFrame& frame, const Matrix& x);

/// G = U1 V1^* + L T V2^*.
Matrix assemble_subgradient(const SubdifferentialFrame& frame, const Matrix& t);

/// s_1(G) <= 1 + tol, ||G||_1 <= k + tol and Re tr(G^* A) >= ||A||_(k) - tol.
bool subgradient_membership(const Matrix& a, int k, const Matrix& g, double tol);

/// Random extreme point sum u_i v_i^* of the subdifferential.
Matrix sample_subgradient(const Matrix& a, int k, Rng& rng);
Matrix sample_subgradient(const SubdifferentialFrame& frame, Rng& rng);

}  // namespace kyfan
