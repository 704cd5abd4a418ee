#include "kyfan/subdiff.hpp"

#include <algorithm>

#include "kyfan/norms.hpp"

namespace kyfan {

Matrix SubdifferentialFrame::left_boundary() const {
  if (!degenerate_zero) return U2;
  Matrix out(U2.rows(), U2.cols() + U3.cols());
  out << U2, U3;
  return out;
}

SpectralSetDescriptor SubdifferentialFrame::spectral_set() const {
  SpectralSetDescriptor d;
  d.q = part.q;
  d.cols = part.boundary_dim();
  if (degenerate_zero) {
    d.kind = SpectralSetKind::kGeneral;
    d.rows = n() - part.k + part.q;
  } else {
    d.kind = SpectralSetKind::kPsd;
    d.rows = part.boundary_dim();
  }
  return d;
}

SubdifferentialFrame build_frame(const SvdFrame& svd, int k, std::optional<double> cluster_tol) {
  const int n = svd.size();
  if (k < 1 || k > n) throw Error(ErrorCode::kKOutOfRange, "k must lie in 1..n");
  SubdifferentialFrame f;
  f.svd = svd;
  f.part = cluster_spectrum(svd.S, k, cluster_tol.value_or(default_cluster_tol(svd.S)));

  const int fixed = f.part.fixed_count();
  const int mid = f.part.boundary_dim();
  const int tail = f.part.tail_count(n);
  f.U1 = svd.U.leftCols(fixed);
  f.V1 = svd.V.leftCols(fixed);
  f.U2 = svd.U.middleCols(fixed, mid);
  f.V2 = svd.V.middleCols(fixed, mid);
  f.U3 = svd.U.rightCols(tail);
  f.V3 = svd.V.rightCols(tail);

  const double top = svd.largest();
  const double sk = svd.S(k - 1);
  f.degenerate_zero = top == 0.0 || sk <= kRankTol * top;
  f.rank_ambiguous = top > 0.0 && sk > 1e-14 * top && sk < 1e-10 * top;
  return f;
}

SubdifferentialFrame build_frame(const Matrix& a, int k, std::optional<double> cluster_tol) {
  require_square(a, "A");
  if (k < 1 || k > a.rows()) throw Error(ErrorCode::kKOutOfRange, "k must lie in 1..n");
  return build_frame(svd(a), k, cluster_tol);
}

Matrix assemble_subgradient(const SubdifferentialFrame& frame, const Matrix& t) {
  return frame.U1 * frame.V1.adjoint() + frame.left_boundary() * t * frame.V2.adjoint();
}

SupportResult support_subgradient(const SubdifferentialFrame& frame, const Matrix& x) {
  if (x.rows() != frame.n() || x.cols() != frame.n())
    throw Error(ErrorCode::kShapeMismatch, "direction must match A");
  const double fixed = (frame.U1.adjoint() * x * frame.V1).trace().real();
  const Matrix compression = frame.left_boundary().adjoint() * x * frame.V2;
  FanMaximum fan = frame.degenerate_zero ? top_q_singframe(compression, frame.q())
                                         : top_q_eigsum(herm(compression), frame.q());
  SupportResult out;
  out.value = fixed + fan.value;
  out.t = std::move(fan.maximizer);
  out.subgradient = assemble_subgradient(frame, out.t);
  return out;
}

double directional_derivative(const SubdifferentialFrame& frame, const Matrix& x) {
  if (x.rows() != frame.n() || x.cols() != frame.n())
    throw Error(ErrorCode::kShapeMismatch, "direction must match A");
  const double fixed = (frame.U1.adjoint() * x * frame.V1).trace().real();
  const Matrix compression = frame.left_boundary().adjoint() * x * frame.V2;
  if (frame.degenerate_zero) return fixed + top_q_singsum(compression, frame.q());
  return fixed + top_q_eigsum(herm(compression), frame.q()).value;
}

double directional_derivative(const Matrix& a, int k, const Matrix& x) {
  if (x.rows() != a.rows() || x.cols() != a.cols())
    throw Error(ErrorCode::kShapeMismatch, "direction must match A");
  return directional_derivative(build_frame(a, k), x);
}

bool subgradient_membership(const Matrix& a, int k, const Matrix& g, double tol) {
  if (g.rows() != a.rows() || g.cols() != a.cols())
    throw Error(ErrorCode::kShapeMismatch, "G must match A");
  const RealVector s = singular_values(g);
  const double norm_a = ky_fan_norm(a, k);
  if (s(0) > 1.0 + tol) return false;
  if (s.sum() > k + tol) return false;
  return (g.adjoint() * a).trace().real() >= norm_a - tol * std::max(1.0, norm_a);
}

Matrix sample_subgradient(const SubdifferentialFrame& frame, Rng& rng) {
  const int q = frame.q();
  const Matrix left = frame.left_boundary();
  if (!frame.degenerate_zero) {
    // Rotating a q-frame inside the boundary cluster keeps A v_i = s_i u_i.
    const Matrix w = random_unitary(static_cast<int>(frame.V2.cols()), rng).leftCols(q);
    return assemble_subgradient(frame, w * w.adjoint());
  }
  const Matrix x = random_unitary(static_cast<int>(left.cols()), rng).leftCols(q);
  const Matrix y = random_unitary(static_cast<int>(frame.V2.cols()), rng).leftCols(q);
  return assemble_subgradient(frame, x * y.adjoint());
}

Matrix sample_subgradient(const Matrix& a, int k, Rng& rng) {
  return sample_subgradient(build_frame(a, k), rng);
}

}  // namespace kyfan
