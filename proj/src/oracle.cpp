#include "kyfan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <gsl/gsl_multimin.h>

#include "kyfan/norms.hpp"
#include "kyfan/parallel.hpp"

namespace kyfan {

namespace {

using Objective = std::function<double(const std::vector<double>&)>;

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
};

double gsl_trampoline(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const Objective*>(params);
  std::vector<double> x(v->size);
  for (std::size_t i = 0; i < v->size; ++i) x[i] = gsl_vector_get(v, i);
  return f(x);
}

MinimizeResult nelder_mead(const Objective& f, const std::vector<double>& start, double step,
                           int max_iter = 2000) {
  const std::size_t n = start.size();
  gsl_multimin_function fn{&gsl_trampoline, n, const_cast<Objective*>(&f)};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, start[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-13 * std::max(step, 1e-300)) ==
        GSL_SUCCESS)
      break;
  }
  MinimizeResult out;
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = gsl_vector_get(s->x, i);
  out.value = s->fval;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return out;
}

using LongMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

long double ky_fan_long(const LongMatrix& m, int k) {
  Eigen::JacobiSVD<LongMatrix> svd(m);
  return svd.singularValues().head(k).sum();
}

}  // namespace

std::string_view to_string(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::kOrthogonal: return "ORTHOGONAL";
    case OracleVerdict::kNotOrthogonal: return "NOT_ORTHOGONAL";
    case OracleVerdict::kBoundary: return "BOUNDARY";
    case OracleVerdict::kNoCounterexample: return "NO_COUNTEREXAMPLE";
  }
  return "BOUNDARY";
}

LambdaMin grid_min_norm(const Matrix& a, const Matrix& b, int k, const GridSpec& spec) {
  const double norm_a = ky_fan_norm(a, k);
  const double norm_b = ky_fan_norm(b, k);
  if (norm_b == 0.0) return {0.0, norm_a};
  const double radius = spec.radius > 0 ? spec.radius : 2.0 * norm_a / norm_b;
  if (radius == 0.0) return {0.0, norm_a};

  const int angles = std::max(spec.coarse_points, 64);
  const int rings = angles / 2;
  std::vector<LambdaMin> grid(static_cast<std::size_t>(angles) * rings + 1);
  grid.back() = {0.0, norm_a};
  parallel_for(grid.size() - 1, [&](std::size_t idx) {
    const int ring = static_cast<int>(idx) / angles;
    const int ang = static_cast<int>(idx) % angles;
    const Complex lambda = std::polar(radius * (ring + 1) / rings, 2.0 * std::numbers::pi * ang / angles);
    grid[idx] = {lambda, ky_fan_norm(a + lambda * b, k)};
  });
  std::sort(grid.begin(), grid.end(), [](const auto& x, const auto& y) { return x.value < y.value; });

  LambdaMin best = grid.front();
  const Objective f = [&](const std::vector<double>& x) {
    return ky_fan_norm(a + Complex(x[0], x[1]) * b, k);
  };
  const int runs = std::min<int>(std::max(spec.refine_rounds, 1), static_cast<int>(grid.size()));
  for (int i = 0; i < runs; ++i) {
    const MinimizeResult r =
        nelder_mead(f, {grid[i].lambda.real(), grid[i].lambda.imag()}, radius / rings);
    if (r.value < best.value) best = {Complex(r.x[0], r.x[1]), r.value};
  }
  return best;
}

OracleVerdict oracle_check_pair(const Matrix& a, const Matrix& b, int k, const GridSpec& spec,
                                double tol_decide, double tol_strict) {
  const double norm_a = ky_fan_norm(a, k);
  const double scale = norm_a + ky_fan_norm(b, k);
  const LambdaMin m = grid_min_norm(a, b, k, spec);
  if (m.value < norm_a - tol_strict * scale) return OracleVerdict::kNotOrthogonal;
  if (m.value >= norm_a - tol_decide * scale) return OracleVerdict::kOrthogonal;
  return OracleVerdict::kBoundary;
}

double fd_directional(const Matrix& a, const Matrix& x, int k, double t) {
  const LongMatrix la = a.cast<std::complex<long double>>();
  const LongMatrix lx = x.cast<std::complex<long double>>();
  const long double lt = t;
  return static_cast<double>((ky_fan_long(la + lt * lx, k) - ky_fan_long(la, k)) / lt);
}

std::vector<Complex> sample_range_points(const Matrix& a, const Matrix& b, int k, int n_samples,
                                         Rng& rng) {
  const SvdFrame f = svd(a);
  if (k < 1 || k > f.size()) throw Error(ErrorCode::kKOutOfRange, "k must lie in 1..n");
  if (f.S(k - 1) <= kRankTol * f.largest() || f.largest() == 0.0)
    throw Error(ErrorCode::kDegenerateRank, "range set sampling needs s_k(A) > 0");
  const SpectralPartition part = cluster_spectrum(f.S, k, default_cluster_tol(f.S));
  const Cluster& c = part.boundary_cluster();
  const Matrix rotated = f.polarU.adjoint() * b;
  const auto fixed = f.V.leftCols(c.begin);
  const Complex base = (fixed.adjoint() * rotated * fixed).trace();
  const auto span = f.V.middleCols(c.begin, c.size());
  const int q = k - c.begin;

  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const Matrix u = span * random_unitary(c.size(), rng).leftCols(q);
    out.push_back(base + (u.adjoint() * rotated * u).trace());
  }
  return out;
}

OracleVerdict oracle_check_subspace(const Matrix& a, std::span<const Matrix> basis, int k, int restarts,
                                    Rng& rng, double tol_strict) {
  if (basis.empty()) return OracleVerdict::kNoCounterexample;
  const double norm_a = ky_fan_norm(a, k);
  double basis_scale = 0.0;
  for (const Matrix& w : basis) basis_scale = std::max(basis_scale, ky_fan_norm(w, k));
  if (basis_scale == 0.0) return OracleVerdict::kNoCounterexample;
  const double threshold = norm_a - tol_strict * (norm_a + basis_scale);
  const std::size_t d = basis.size();

  auto combo = [&](const std::vector<double>& x) {
    Matrix m = a;
    for (std::size_t j = 0; j < d; ++j) m += Complex(x[2 * j], x[2 * j + 1]) * basis[j];
    return m;
  };
  const Objective f = [&](const std::vector<double>& x) { return ky_fan_norm(combo(x), k); };

  // Coordinate sweeps: one complex coefficient at a time, each a pair problem.
  std::vector<double> x(2 * d, 0.0);
  for (int pass = 0; pass < 3; ++pass) {
    for (std::size_t j = 0; j < d; ++j) {
      x[2 * j] = x[2 * j + 1] = 0.0;
      const LambdaMin m = grid_min_norm(combo(x), basis[j], k);
      x[2 * j] = m.lambda.real();
      x[2 * j + 1] = m.lambda.imag();
    }
    if (f(x) < threshold) return OracleVerdict::kNotOrthogonal;
  }
  const double step = norm_a / basis_scale;
  if (nelder_mead(f, x, 0.1 * step).value < threshold) return OracleVerdict::kNotOrthogonal;

  std::normal_distribution<double> gauss(0.0, step / std::sqrt(static_cast<double>(d)));
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> start(2 * d);
    for (double& v : start) v = gauss(rng);
    if (nelder_mead(f, start, 0.5 * step).value < threshold) return OracleVerdict::kNotOrthogonal;
  }
  return OracleVerdict::kNoCounterexample;
}

ParallelProbe oracle_parallel_grid(const Matrix& a, const Matrix& b, int k, int points) {
  const double norm_a = ky_fan_norm(a, k);
  const double norm_b = ky_fan_norm(b, k);
  auto value = [&](double phi) { return ky_fan_norm(a + std::polar(1.0, phi) * b, k); };
  const double step = 2.0 * std::numbers::pi / points;
  std::vector<double> v(static_cast<std::size_t>(points));
  parallel_for(v.size(), [&](std::size_t i) { v[i] = value(step * static_cast<double>(i)); });
  const auto best = std::max_element(v.begin(), v.end());
  double phi = step * static_cast<double>(best - v.begin());
  double top = *best;

  double lo = phi - step, hi = phi + step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = value(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = value(x2);
    }
  }
  if (std::max(f1, f2) > top) {
    phi = f1 >= f2 ? x1 : x2;
    top = std::max(f1, f2);
  }
  return {std::polar(1.0, phi), top, top - norm_a - norm_b};
}

}  // namespace kyfan
