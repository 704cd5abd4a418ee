#include "kyfan/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kyfan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kKOutOfRange: return "KOutOfRange";
    case ErrorCode::kQOutOfRange: return "QOutOfRange";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNotOrthogonal: return "NotOrthogonal";
    case ErrorCode::kDegenerateRank: return "DegenerateRank";
    case ErrorCode::kWitnessSearchFailed: return "WitnessSearchFailed";
    case ErrorCode::kBadBlockStructure: return "BadBlockStructure";
    case ErrorCode::kParse: return "ParseError";
  }
  return "Unknown";
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::kNonFinite, std::string(what) + " has non-finite entries");
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::kShapeMismatch, std::string(what) + " must be square");
}

Matrix herm(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double unitarity_defect(const Matrix& q) {
  if (q.cols() == 0) return 0.0;
  return max_abs(q.adjoint() * q - Matrix::Identity(q.cols(), q.cols()));
}

void normalize_column_phases(Matrix& columns) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    auto col = columns.col(j);
    const double scale = col.cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > 1e-8 * scale) {
        col *= std::conj(col(i)) / std::abs(col(i));
        col(i) = std::abs(col(i));
        break;
      }
    }
  }
}

int SpectralPartition::cluster_of(int i) const {
  for (int c = 0; c < static_cast<int>(clusters.size()); ++c)
    if (clusters[c].contains(i)) return c;
  return -1;
}

namespace {

double off_diagonal_norm(const Matrix& h) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      if (i != j) sum += std::norm(h(i, j));
  return std::sqrt(sum);
}

// Rotation annihilating h(p,q). The 2x2 block is first made real by the phase
// of h(p,q), then a real Jacobi rotation diagonalizes it.
void jacobi_rotate(Matrix& h, Matrix& v, int p, int q) {
  const Complex c = h(p, q);
  const double mag = std::abs(c);
  if (mag == 0.0) return;
  const Complex phase = c / mag;
  const double a = h(p, p).real();
  const double b = h(q, q).real();
  const double theta = (b - a) / (2.0 * mag);
  const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double cs = 1.0 / std::sqrt(t * t + 1.0);
  const double sn = t * cs;

  // J = diag(1, conj(phase)) * [[cs, sn], [-sn, cs]]
  const Complex j00 = cs, j01 = sn;
  const Complex j10 = -sn * std::conj(phase), j11 = cs * std::conj(phase);

  const Eigen::Index n = h.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex hp = h(i, p), hq = h(i, q);
    h(i, p) = hp * j00 + hq * j10;
    h(i, q) = hp * j01 + hq * j11;
    const Complex vp = v(i, p), vq = v(i, q);
    v(i, p) = vp * j00 + vq * j10;
    v(i, q) = vp * j01 + vq * j11;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex hp = h(p, i), hq = h(q, i);
    h(p, i) = std::conj(j00) * hp + std::conj(j10) * hq;
    h(q, i) = std::conj(j01) * hp + std::conj(j11) * hq;
  }
  h(p, q) = 0.0;
  h(q, p) = 0.0;
  h(p, p) = h(p, p).real();
  h(q, q) = h(q, q).real();
}

}  // namespace

EigenFrame hermitian_eig(const Matrix& input) {
  require_square(input, "hermitian_eig input");
  require_finite(input, "hermitian_eig input");
  const double asym = max_abs(input - input.adjoint());
  if (asym > 1e-8 * (1.0 + max_abs(input)))
    throw Error(ErrorCode::kNotHermitian, "hermitian_eig input is not Hermitian");

  const int n = static_cast<int>(input.rows());
  Matrix h = herm(input);
  Matrix v = Matrix::Identity(n, n);
  const double total = h.norm();

  constexpr int kMaxSweeps = 100;
  bool converged = total == 0.0 || n <= 1;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (off_diagonal_norm(h) <= 1e-14 * total) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) jacobi_rotate(h, v, p, q);
  }
  if (!converged) converged = off_diagonal_norm(h) <= 1e-14 * total;
  if (!converged) throw Error(ErrorCode::kNoConvergence, "Jacobi sweeps exceeded");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return h(i, i).real() > h(j, j).real(); });

  EigenFrame frame;
  frame.values.resize(n);
  frame.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    frame.values(i) = h(order[i], order[i]).real();
    frame.vectors.col(i) = v.col(order[i]);
  }
  normalize_column_phases(frame.vectors);
  return frame;
}

SvdFrame svd(const Matrix& a) {
  require_square(a, "svd input");
  require_finite(a, "svd input");
  const int n = static_cast<int>(a.rows());
  Eigen::JacobiSVD<Matrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);

  SvdFrame frame;
  frame.U = solver.matrixU();
  frame.V = solver.matrixV();
  frame.S = solver.singularValues();

  // Fix the joint phase of each singular pair through V; for zero singular
  // values U and V columns are independent and normalized separately.
  const double rank_floor = kRankTol * frame.largest();
  for (int j = 0; j < n; ++j) {
    auto vcol = frame.V.col(j);
    const double scale = vcol.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
      if (std::abs(vcol(i)) > 1e-8 * scale) {
        const Complex rot = std::conj(vcol(i)) / std::abs(vcol(i));
        vcol *= rot;
        vcol(i) = std::abs(vcol(i));
        if (frame.S(j) > rank_floor) frame.U.col(j) *= rot;
        break;
      }
    }
  }
  for (int j = 0; j < n; ++j) {
    if (frame.S(j) > rank_floor) continue;
    Matrix col = frame.U.col(j);
    normalize_column_phases(col);
    frame.U.col(j) = col;
  }

  frame.polarU = frame.U * frame.V.adjoint();
  frame.absA = frame.V * frame.S.cast<Complex>().asDiagonal() * frame.V.adjoint();
  return frame;
}

RealVector singular_values(const Matrix& m) {
  require_finite(m, "singular_values input");
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<Matrix> solver(m);
  return solver.singularValues();
}

double default_cluster_tol(const RealVector& descending) {
  const double top = descending.size() > 0 ? descending(0) : 0.0;
  return 1e-8 * std::max(top, 1.0);
}

SpectralPartition cluster_spectrum(const RealVector& values, int k, double cluster_tol) {
  const int n = static_cast<int>(values.size());
  if (k < 1 || k > n) throw Error(ErrorCode::kKOutOfRange, "k must lie in 1..n");

  SpectralPartition part;
  part.k = k;
  part.cluster_tol = cluster_tol;
  int begin = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || values(i - 1) - values(i) > cluster_tol) {
      double mean = 0.0;
      for (int j = begin; j < i; ++j) mean += values(j);
      part.clusters.push_back({mean / (i - begin), begin, i});
      begin = i;
    }
  }
  part.boundary = part.cluster_of(k - 1);
  const Cluster& c = part.boundary_cluster();
  part.q = k - c.begin;
  part.r = c.end - k;
  return part;
}

FanMaximum top_q_eigsum(const Matrix& h, int q) {
  const int n = static_cast<int>(h.rows());
  if (q < 0 || q > n) throw Error(ErrorCode::kQOutOfRange, "q must lie in 0..dim");
  FanMaximum out;
  out.maximizer = Matrix::Zero(n, n);
  if (q == 0) return out;
  const EigenFrame frame = hermitian_eig(h);
  const auto top = frame.vectors.leftCols(q);
  out.value = frame.values.head(q).sum();
  out.maximizer = top * top.adjoint();
  return out;
}

double top_q_singsum(const Matrix& m, int q) {
  const int limit = static_cast<int>(std::min(m.rows(), m.cols()));
  if (q < 0 || q > limit) throw Error(ErrorCode::kQOutOfRange, "q must lie in 0..min(rows, cols)");
  if (q == 0) return 0.0;
  return singular_values(m).head(q).sum();
}

FanMaximum top_q_singframe(const Matrix& m, int q) {
  const int limit = static_cast<int>(std::min(m.rows(), m.cols()));
  if (q < 0 || q > limit) throw Error(ErrorCode::kQOutOfRange, "q must lie in 0..min(rows, cols)");
  FanMaximum out;
  out.maximizer = Matrix::Zero(m.rows(), m.cols());
  if (q == 0) return out;
  require_finite(m, "top_q_singframe input");
  Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.value = solver.singularValues().head(q).sum();
  out.maximizer = solver.matrixU().leftCols(q) * solver.matrixV().leftCols(q).adjoint();
  return out;
}

Matrix random_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return m;
}

Matrix random_unitary(int n, Rng& rng) {
  const Matrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Matrix complete_to_unitary(const Matrix& columns) {
  const Eigen::Index n = columns.rows();
  Matrix out(n, n);
  Eigen::Index filled = 0;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) out.col(filled++) = columns.col(j);
  for (Eigen::Index e = 0; e < n && filled < n; ++e) {
    Vector cand = Vector::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < filled; ++j) cand -= out.col(j) * out.col(j).dot(cand);
    const double norm = cand.norm();
    if (norm > 1e-6) out.col(filled++) = cand / norm;
  }
  return out;
}

std::vector<Matrix> orthonormalize(std::span<const Matrix> basis, double tol) {
  std::vector<Matrix> out;
  for (const Matrix& w : basis) {
    Matrix cand = w;
    const double scale = cand.norm();
    if (scale == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const Matrix& e : out) cand -= e * (e.adjoint() * cand).trace();
    const double norm = cand.norm();
    if (norm > tol * scale) out.push_back(cand / norm);
  }
  return out;
}

}  // namespace kyfan
