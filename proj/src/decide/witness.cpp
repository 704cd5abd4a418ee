#include <algorithm>
#include <cmath>
#include <numbers>

#include "internal.hpp"
#include "kyfan/min_norm.hpp"
#include "kyfan/norms.hpp"

namespace kyfan {

namespace detail {

namespace {

Matrix orthonormal_columns(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

Complex frame_value(const Matrix& c, const Matrix& w) { return (w.adjoint() * c * w).trace(); }

double distance_to_segment(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

// Damped Gauss-Newton on the Grassmannian for the two real equations
// tr(W^* C W) = target. Tangent steps are W_perp Y, retracted by QR.
FrameSolve refine_frame(const Matrix& c, const Matrix& start, Complex target, double tol) {
  const Eigen::Index m = c.rows();
  const Eigen::Index q = start.cols();
  Matrix w = orthonormal_columns(start);
  double res = std::abs(frame_value(c, w) - target);
  double mu = -1.0;
  for (int it = 0; it < 200 && res > tol; ++it) {
    const Complex r = frame_value(c, w) - target;
    const Matrix perp = complete_to_unitary(w).rightCols(m - q);
    const Matrix e = perp.adjoint() * c * w;
    const Matrix f = w.adjoint() * c * perp;
    const Eigen::Index params = (m - q) * q;
    Eigen::MatrixXd jac(2, 2 * params);
    for (Eigen::Index i = 0; i < m - q; ++i)
      for (Eigen::Index j = 0; j < q; ++j) {
        const Eigen::Index idx = i * q + j;
        const Complex da = e(i, j) + f(j, i);
        const Complex db = Complex(0.0, 1.0) * (f(j, i) - e(i, j));
        jac(0, 2 * idx) = da.real();
        jac(1, 2 * idx) = da.imag();
        jac(0, 2 * idx + 1) = db.real();
        jac(1, 2 * idx + 1) = db.imag();
      }
    const Eigen::Matrix2d jj = jac * jac.transpose();
    if (mu < 0) mu = 1e-12 * jj.trace() + 1e-300;
    const Eigen::Vector2d rv(r.real(), r.imag());

    bool accepted = false;
    for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
      const Eigen::Vector2d coef = (jj + mu * Eigen::Matrix2d::Identity()).ldlt().solve(rv);
      const Eigen::VectorXd step = -jac.transpose() * coef;
      for (double alpha = 1.0; alpha > 1e-4; alpha *= 0.5) {
        Matrix y(m - q, q);
        for (Eigen::Index i = 0; i < m - q; ++i)
          for (Eigen::Index j = 0; j < q; ++j) {
            const Eigen::Index idx = i * q + j;
            y(i, j) = alpha * Complex(step(2 * idx), step(2 * idx + 1));
          }
        const Matrix cand = orthonormal_columns(w + perp * y);
        const double cand_res = std::abs(frame_value(c, cand) - target);
        if (cand_res < res) {
          w = cand;
          res = cand_res;
          accepted = true;
          break;
        }
      }
      if (accepted) mu = std::max(mu / 4.0, 1e-14 * jj.trace() + 1e-300);
      else mu = mu * 100.0 + 1e-12 * jj.trace();
    }
    if (!accepted) break;
  }
  return {w, res};
}

}  // namespace

FrameSolve solve_frame_target(const Matrix& c, int q, Complex target, Rng& rng, double tol) {
  const int m = static_cast<int>(c.rows());
  if (q >= m) {
    const Matrix w = Matrix::Identity(m, m);
    return {w, std::abs(c.trace() - target)};
  }

  // Support frames: boundary points of W_q(C) in 32 directions.
  constexpr int kDirections = 32;
  std::vector<Matrix> frames;
  std::vector<Complex> points;
  for (int j = 0; j < kDirections; ++j) {
    const Complex e = std::polar(1.0, -2.0 * std::numbers::pi * j / kDirections);
    const EigenFrame eig = hermitian_eig(herm(e * c));
    frames.push_back(eig.vectors.leftCols(q));
    points.push_back(frame_value(c, frames.back()));
  }

  std::vector<Matrix> starts;
  // Homotopy between the two support frames whose chord passes closest to
  // the target; the best point along the path seeds the refinement.
  int best_a = 0, best_b = 0;
  double best_dist = std::abs(points[0] - target);
  for (int a = 0; a < kDirections; ++a)
    for (int b = a; b < kDirections; ++b) {
      const double dist = distance_to_segment(target, points[a], points[b]);
      if (dist < best_dist) {
        best_dist = dist;
        best_a = a;
        best_b = b;
      }
    }
  {
    const Matrix& wa = frames[best_a];
    Eigen::JacobiSVD<Matrix> align(frames[best_b].adjoint() * wa, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix wb = frames[best_b] * (align.matrixU() * align.matrixV().adjoint());
    Matrix best_w = wa;
    double best_res = std::abs(points[best_a] - target);
    for (int s = 1; s <= 64; ++s) {
      const double t = s / 64.0;
      const Matrix w = orthonormal_columns((1.0 - t) * wa + t * wb);
      const double res = std::abs(frame_value(c, w) - target);
      if (res < best_res) {
        best_res = res;
        best_w = w;
      }
    }
    starts.push_back(best_w);
  }
  {
    int nearest = 0;
    for (int j = 1; j < kDirections; ++j)
      if (std::abs(points[j] - target) < std::abs(points[nearest] - target)) nearest = j;
    starts.push_back(frames[nearest]);
  }

  FrameSolve best{starts.front(), std::abs(frame_value(c, starts.front()) - target)};
  constexpr int kRestarts = 24;
  for (int attempt = 0; attempt < static_cast<int>(starts.size()) + kRestarts; ++attempt) {
    const Matrix start = attempt < static_cast<int>(starts.size())
                             ? starts[attempt]
                             : random_unitary(m, rng).leftCols(q);
    FrameSolve sol = refine_frame(c, start, target, tol);
    if (sol.residual < best.residual) best = std::move(sol);
    if (best.residual <= tol) break;
  }
  return best;
}

WitnessSystem assemble_witness(const SubdifferentialFrame& frame, const Matrix& w) {
  WitnessSystem out;
  out.vectors.resize(frame.n(), frame.k());
  out.vectors << frame.V1, frame.V2 * w;
  out.polar = frame.svd.polarU;
  return out;
}

std::optional<WitnessSystem> witness_for_point(const SubdifferentialFrame& frame,
                                               const RangeSetModel& model, Complex point,
                                               double tol, Rng& rng, double* residual) {
  const FrameSolve sol = solve_frame_target(model.compression, model.m, point - model.fixed_part, rng, tol);
  if (residual) *residual = sol.residual;
  if (sol.residual > tol) return std::nullopt;
  return assemble_witness(frame, sol.frame);
}

TSolve solve_block_feasibility(Complex b11, const Matrix& m, int q, bool general, double target) {
  std::vector<Matrix> atoms;
  auto image = [&](const Matrix& t) {
    const Complex c = b11 + (t.adjoint() * m).trace();
    Eigen::VectorXd p(2);
    p << c.real(), c.imag();
    return p;
  };
  auto oracle = [&](const Eigen::VectorXd& x) {
    const Complex dir(x(0), x(1));
    const Matrix weighted = std::conj(dir) * m;
    Matrix s;
    if (general) s = -top_q_singframe(weighted, q).maximizer;
    else s = top_q_eigsum(herm(Matrix(-weighted)), q).maximizer;
    atoms.push_back(s);
    return Atom{image(s), static_cast<int>(atoms.size()) - 1};
  };

  Eigen::VectorXd seed(2);
  seed << b11.real(), b11.imag();
  if (seed.norm() == 0.0) seed << 1.0, 0.0;
  const Atom start = oracle(seed);

  MinNormOptions options;
  options.target_norm = target;
  options.gap_tol = target * target / 4.0;
  const MinNormResult res = min_norm_point(start, oracle, options);

  TSolve out;
  out.t = Matrix::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < res.ids.size(); ++i) out.t += res.weights[i] * atoms[res.ids[i]];
  out.residual = std::abs(b11 + (out.t.adjoint() * m).trace());
  out.distance_lower = res.distance_lower;
  out.converged = out.residual <= target;
  return out;
}

TWitnessResult witness_T_from_frame(const SubdifferentialFrame& frame, const Matrix& b,
                                    const Tolerances& tol, double scale) {
  const BlockPartition blocks = build_blocks(frame, b);
  const bool general = frame.degenerate_zero;
  const Matrix m = blocks.boundary_stack(general);
  const double target = 1e-3 * tol.cert * std::max(1.0, scale);
  const TSolve sol = solve_block_feasibility(blocks.trace_b11, m, frame.q(), general, target);
  if (sol.residual > tol.cert * std::max(1.0, scale)) {
    if (sol.distance_lower > tol.strict * scale)
      throw Error(ErrorCode::kNotOrthogonal, "block criterion is infeasible");
    throw Error(ErrorCode::kNoConvergence,
                "Frank-Wolfe residual " + std::to_string(sol.residual) + " above tolerance");
  }
  TWitnessResult out;
  out.t = WitnessT{sol.t, frame.svd.U, frame.svd.V, frame.q(), frame.part.r, general};
  out.g = WitnessG{assemble_subgradient(frame, sol.t)};
  out.residual = sol.residual;
  return out;
}

}  // namespace detail

WitnessSystem find_witness_system(const Matrix& a, const Matrix& b, int k, const Tolerances& tol,
                                  Rng& rng) {
  require_square(a, "A");
  if (b.rows() != a.rows() || b.cols() != a.cols())
    throw Error(ErrorCode::kShapeMismatch, "B must have the shape of A");
  const SubdifferentialFrame frame = build_frame(a, k, tol.cluster);
  if (frame.degenerate_zero)
    throw Error(ErrorCode::kDegenerateRank, "s_k(A) = 0: the witness system need not exist");
  const RangeSetModel model = build_range_model(frame, b);
  const double scale = detail::pair_scale(frame, b);
  for (int j = 0; j < 256; ++j) {
    if (model.support(2.0 * std::numbers::pi * j / 256) < -tol.strict * scale)
      throw Error(ErrorCode::kNotOrthogonal, "0 is outside W(U^*B, |A|)");
  }
  double residual = 0.0;
  const double target = 1e-2 * tol.cert * std::max(1.0, ky_fan_norm(b, k));
  auto w = detail::witness_for_point(frame, model, 0.0, target, rng, &residual);
  if (!w) throw Error(ErrorCode::kWitnessSearchFailed, "best residual " + std::to_string(residual));
  return *w;
}

TWitnessResult find_witness_T(const Matrix& a, const Matrix& b, int k, const Tolerances& tol) {
  require_square(a, "A");
  if (b.rows() != a.rows() || b.cols() != a.cols())
    throw Error(ErrorCode::kShapeMismatch, "B must have the shape of A");
  const SubdifferentialFrame frame = build_frame(a, k, tol.cluster);
  return detail::witness_T_from_frame(frame, b, tol, detail::pair_scale(frame, b));
}

}  // namespace kyfan
