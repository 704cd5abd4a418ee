#include "kyfan/generate.hpp"

#include <algorithm>
#include <numbers>

#include "kyfan/norms.hpp"

namespace kyfan {

std::optional<InstanceKind> parse_instance_kind(std::string_view name) {
  if (name == "orthogonal") return InstanceKind::kOrthogonal;
  if (name == "nonorthogonal") return InstanceKind::kNonOrthogonal;
  if (name == "parallel") return InstanceKind::kParallel;
  if (name == "subspace") return InstanceKind::kSubspace;
  return std::nullopt;
}

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kOrthogonal: return "orthogonal";
    case InstanceKind::kNonOrthogonal: return "nonorthogonal";
    case InstanceKind::kParallel: return "parallel";
    case InstanceKind::kSubspace: return "subspace";
  }
  return "orthogonal";
}

RealVector random_spectrum(int n, int k, bool cluster, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.5, 3.0);
  RealVector s(n);
  for (int i = 0; i < n; ++i) s(i) = unit(rng);
  std::sort(s.begin(), s.end(), std::greater<>());
  if (cluster && n >= 2) {
    // cluster [lo, hi) around index k-1, with at least two members
    std::uniform_int_distribution<int> below(0, k - 1);
    std::uniform_int_distribution<int> above(0, n - k);
    int lo = k - 1 - below(rng);
    int hi = k + above(rng);
    if (hi - lo < 2) {
      if (hi < n) ++hi;
      else --lo;
    }
    const double v = s(k - 1);
    for (int i = lo; i < hi; ++i) s(i) = v;
    std::sort(s.begin(), s.end(), std::greater<>());
  }
  return s;
}

Matrix matrix_with_spectrum(const RealVector& s, Rng& rng, Matrix* polar, Matrix* right) {
  const int n = static_cast<int>(s.size());
  const Matrix u = random_unitary(n, rng);
  const Matrix v = random_unitary(n, rng);
  if (polar) *polar = u;
  if (right) *right = v;
  return u * v * s.cast<Complex>().asDiagonal() * v.adjoint();
}

namespace {

// Span of the eigenvectors of |A| for the cluster of s_k, and how many of
// them fall inside the top k.
struct ClusterSpan {
  int begin = 0;
  int end = 0;
};

ClusterSpan boundary_span(const RealVector& s, int k) {
  ClusterSpan c{k - 1, k};
  while (c.begin > 0 && s(c.begin - 1) == s(k - 1)) --c.begin;
  while (c.end < s.size() && s(c.end) == s(k - 1)) ++c.end;
  return c;
}

// Random compatible system: top-k eigenvectors of |A|, with a Haar-random
// q-frame inside the boundary cluster.
Matrix random_system(const Matrix& v, const RealVector& s, int k, Rng& rng) {
  const ClusterSpan c = boundary_span(s, k);
  const int q = k - c.begin;
  const int m = c.end - c.begin;
  Matrix out(v.rows(), k);
  out << v.leftCols(c.begin), v.middleCols(c.begin, m) * random_unitary(m, rng).leftCols(q);
  return out;
}

}  // namespace

Instance generate_instance(int n, int k, InstanceKind kind, Rng& rng, int subspace_dim) {
  if (n < 2) throw Error(ErrorCode::kShapeMismatch, "n must be at least 2");
  if (k < 1 || k > n) throw Error(ErrorCode::kKOutOfRange, "k must lie in 1..n");
  Instance inst;
  inst.k = k;
  Matrix polar, v;
  const RealVector s = random_spectrum(n, k, kind != InstanceKind::kNonOrthogonal, rng);
  inst.a = matrix_with_spectrum(s, rng, &polar, &v);

  switch (kind) {
    case InstanceKind::kOrthogonal: {
      // Shift a random Y by a multiple of I so that the average of a few
      // points of W(Y, |A|) moves to 0; B = U Y.
      const Matrix y0 = random_gaussian(n, n, rng);
      Complex z = 0.0;
      constexpr int kPoints = 8;
      for (int i = 0; i < kPoints; ++i) {
        const Matrix u = random_system(v, s, k, rng);
        z += (u.adjoint() * y0 * u).trace();
      }
      z /= static_cast<double>(kPoints);
      inst.b = polar * (y0 - (z / static_cast<double>(k)) * Matrix::Identity(n, n));
      inst.label = "ORTHOGONAL";
      break;
    }
    case InstanceKind::kNonOrthogonal: {
      // ||A + e X - A||_(k) <= ||A||_(k) / 2 keeps 0 out of the range set.
      const Matrix x = random_gaussian(n, n, rng);
      const double eps = 0.5 * ky_fan_norm(inst.a, k) / ky_fan_norm(x, k);
      std::uniform_real_distribution<double> frac(0.0, 1.0);
      inst.b = inst.a + frac(rng) * eps * x;
      inst.label = "NOT_ORTHOGONAL";
      break;
    }
    case InstanceKind::kParallel: {
      // B = e^{i phi} U V D V^* with D's k largest entries first.
      std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
      RealVector d = random_spectrum(n, k, false, rng);
      std::uniform_real_distribution<double> tail(0.0, d(k - 1));
      for (int i = k; i < n; ++i) d(i) = tail(rng);
      inst.b = std::polar(1.0, phase(rng)) * polar * v * d.cast<Complex>().asDiagonal() * v.adjoint();
      inst.label = "PARALLEL";
      break;
    }
    case InstanceKind::kSubspace: {
      // Q = sum of a few random compatible projectors; the basis is
      // Frobenius-orthogonal to U Q.
      Matrix q = Matrix::Zero(n, n);
      constexpr int kMix = 3;
      for (int i = 0; i < kMix; ++i) {
        const Matrix u = random_system(v, s, k, rng);
        q += u * u.adjoint() / static_cast<double>(kMix);
      }
      const Matrix uq = polar * q;
      const int d = std::clamp(subspace_dim, 1, n * n - 1);
      for (int j = 0; j < d; ++j) {
        Matrix x = random_gaussian(n, n, rng);
        x -= uq * ((uq.adjoint() * x).trace() / uq.squaredNorm());
        inst.basis.push_back(x);
      }
      inst.label = "ORTHOGONAL";
      break;
    }
  }
  return inst;
}

ProblemFile to_problem(const Instance& inst, std::uint64_t seed) {
  ProblemFile p;
  p.matrices.emplace("A", inst.a);
  if (inst.b.size() > 0) p.matrices.emplace("B", inst.b);
  for (std::size_t j = 0; j < inst.basis.size(); ++j) {
    const std::string name = "W" + std::to_string(j + 1);
    p.matrices.emplace(name, inst.basis[j]);
    p.subspace.push_back(name);
  }
  p.k = inst.k;
  p.label = inst.label;
  p.seed = seed;
  return p;
}

}  // namespace kyfan
