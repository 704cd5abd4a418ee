#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "kyfan/min_norm.hpp"
#include "kyfan/norms.hpp"

namespace kyfan {

namespace {

// Coefficients c with sum c_l basis_l = d, by least squares on the Gram matrix.
std::vector<Complex> coefficients_in(std::span<const Matrix> basis, const Matrix& d) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  Matrix gram(m, m);
  Vector rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) gram(i, j) = (basis[i].adjoint() * basis[j]).trace();
    rhs(i) = (basis[i].adjoint() * d).trace();
  }
  const Vector c = gram.completeOrthogonalDecomposition().solve(rhs);
  return {c.data(), c.data() + c.size()};
}

}  // namespace

WitnessDensity extract_density(const Matrix& q, const SvdFrame& svd, const SpectralPartition& part,
                               double tol) {
  const Matrix qv = svd.V.adjoint() * q * svd.V;
  const int n = svd.size();
  const int k = part.k;
  const double scale = 1.0 + std::abs(qv.trace());

  // Every entry outside the diagonal blocks of the clusters meeting 1..k must vanish.
  std::vector<int> owner(n, -1);
  for (int c = 0; c < static_cast<int>(part.clusters.size()); ++c) {
    const Cluster& cl = part.clusters[c];
    if (cl.begin >= k) break;
    for (int i = cl.begin; i < cl.end; ++i) owner[i] = c;
  }
  double leak = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (owner[i] < 0 || owner[i] != owner[j]) leak = std::max(leak, std::abs(qv(i, j)));
  if (leak > tol * scale)
    throw Error(ErrorCode::kBadBlockStructure, "Q leaks across eigenclusters by " + std::to_string(leak));

  WitnessDensity out;
  out.polar = svd.polarU;
  for (int c = 0; c < static_cast<int>(part.clusters.size()); ++c) {
    const Cluster& cl = part.clusters[c];
    if (cl.begin >= k) break;
    const int count = std::min(cl.end, k) - cl.begin;
    const Matrix block = qv.block(cl.begin, cl.begin, cl.size(), cl.size());
    if (std::abs(block.trace() - static_cast<double>(count)) > tol * scale)
      throw Error(ErrorCode::kBadBlockStructure, "cluster trace differs from its count inside the top k");
    const auto cols = svd.V.middleCols(cl.begin, cl.size());
    const Matrix density = cols * (block / static_cast<double>(count)) * cols.adjoint();
    for (int i = 0; i < count; ++i) out.densities.push_back(density);
  }
  return out;
}

Decision check_subspace(const Matrix& a, std::span<const Matrix> basis, int k, const Tolerances& tol) {
  require_square(a, "A");
  for (const Matrix& w : basis) {
    if (w.rows() != a.rows() || w.cols() != a.cols())
      throw Error(ErrorCode::kShapeMismatch, "basis matrices must have the shape of A");
    require_finite(w, "basis");
  }
  const SubdifferentialFrame frame = build_frame(a, k, tol.cluster);
  const std::vector<Matrix> ortho = orthonormalize(basis);
  const int d = static_cast<int>(ortho.size());
  const int q = frame.q();
  const Matrix& polar = frame.svd.polarU;

  Decision out;
  out.tolerances = tol;
  out.cluster_tol = frame.part.cluster_tol;
  out.method = "subspace/min-norm-point";
  out.degenerate_rank = frame.degenerate_zero;
  double basis_scale = 0.0;
  for (const Matrix& w : ortho) basis_scale = std::max(basis_scale, ky_fan_norm(w, k));
  out.scale = ky_fan_norm(a, k) + basis_scale;

  // G = V1 V1^* + V2 T V2^* runs over the subdifferential of |A|; the
  // constraints are c_j(T) = tr(W_j^* U G) = f_j + tr(N_j T) = 0.
  const Matrix fixed = frame.V1 * frame.V1.adjoint();
  std::vector<Complex> f(d);
  std::vector<Matrix> nmat(d);
  for (int j = 0; j < d; ++j) {
    const Matrix wu = ortho[j].adjoint() * polar;
    f[j] = (wu * fixed).trace();
    nmat[j] = frame.V2.adjoint() * wu * frame.V2;
  }

  std::vector<Matrix> atoms;
  auto image = [&](const Matrix& t) {
    Eigen::VectorXd p(2 * std::max(d, 1));
    p.setZero();
    for (int j = 0; j < d; ++j) {
      const Complex c = f[j] + (nmat[j] * t).trace();
      p(2 * j) = c.real();
      p(2 * j + 1) = c.imag();
    }
    return p;
  };
  auto oracle = [&](const Eigen::VectorXd& x) {
    Matrix weighted = Matrix::Zero(frame.V2.cols(), frame.V2.cols());
    for (int j = 0; j < d; ++j) weighted += std::conj(Complex(x(2 * j), x(2 * j + 1))) * nmat[j];
    atoms.push_back(top_q_eigsum(herm(Matrix(-weighted)), q).maximizer);
    return Atom{image(atoms.back()), static_cast<int>(atoms.size()) - 1};
  };

  Eigen::VectorXd seed = Eigen::VectorXd::Zero(2 * std::max(d, 1));
  seed(0) = 1.0;
  const Atom start = oracle(seed);
  MinNormOptions options;
  options.target_norm = 1e-2 * tol.decide * out.scale;
  options.gap_tol = options.target_norm * options.target_norm / 4.0;
  const MinNormResult res = min_norm_point(start, oracle, options);
  out.evaluations = res.iterations;

  const double dist = res.point.norm();
  out.margin = -dist;
  out.margin_lower = -dist;

  if (dist <= tol.decide * out.scale) {
    out.verdict = Verdict::kOrthogonal;
    Matrix t = Matrix::Zero(frame.V2.cols(), frame.V2.cols());
    for (std::size_t i = 0; i < res.ids.size(); ++i) t += res.weights[i] * atoms[res.ids[i]];
    const Matrix qmat = fixed + frame.V2 * t * frame.V2.adjoint();
    try {
      out.certificates.emplace_back(extract_density(qmat, frame.svd, frame.part));
    } catch (const Error& e) {
      out.notes.push_back(std::string("density extraction failed: ") + e.what());
    }
    if (frame.degenerate_zero) out.notes.push_back("s_k = 0: certified through the sufficient condition");
    return out;
  }

  if (frame.degenerate_zero) {
    out.verdict = Verdict::kBoundary;
    out.notes.push_back("s_k = 0: the density criterion is only sufficient and was not met");
    return out;
  }

  if (res.distance_lower <= tol.strict * out.scale) {
    out.verdict = Verdict::kBoundary;
    return out;
  }
  out.verdict = Verdict::kNotOrthogonal;

  // -x is a descent direction: g'(A, D) = -dist_lower * ||x|| < 0.
  Matrix dir = Matrix::Zero(a.rows(), a.cols());
  for (int j = 0; j < d; ++j) dir -= Complex(res.point(2 * j), res.point(2 * j + 1)) * ortho[j];
  const double norm_a = ky_fan_norm(a, k);
  const double norm_d = ky_fan_norm(dir, k);
  const detail::LineMin best = detail::line_minimize(a, dir, k, 2.0 * norm_a / norm_d);
  if (best.value < norm_a - detail::violation_slack(norm_a, norm_d, best.t)) {
    std::vector<Complex> coeffs = coefficients_in(basis, Matrix(best.t * dir));
    Matrix combo = a;
    for (std::size_t j = 0; j < basis.size(); ++j) combo += coeffs[j] * basis[j];
    out.certificates.emplace_back(Violation{std::move(coeffs), ky_fan_norm(combo, k)});
  } else {
    out.notes.push_back("descent along the violating direction is below floating-point resolution");
  }
  return out;
}

}  // namespace kyfan
