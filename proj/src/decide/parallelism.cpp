#include <algorithm>
#include <cmath>
#include <numbers>

#include "internal.hpp"
#include "kyfan/norms.hpp"
#include "kyfan/parallel.hpp"

namespace kyfan {

Decision check_parallel(const Matrix& a, const Matrix& b, int k, const Tolerances& tol) {
  require_square(a, "A");
  if (b.rows() != a.rows() || b.cols() != a.cols())
    throw Error(ErrorCode::kShapeMismatch, "B must have the shape of A");
  require_finite(b, "B");
  const SubdifferentialFrame frame = build_frame(a, k, tol.cluster);
  if (frame.degenerate_zero)
    throw Error(ErrorCode::kDegenerateRank, "parallelism test needs s_k(A) > 0");
  const RangeSetModel model = build_range_model(frame, b);
  const double norm_a = ky_fan_norm(a, k);
  const double norm_b = ky_fan_norm(b, k);

  Decision out;
  out.tolerances = tol;
  out.cluster_tol = frame.part.cluster_tol;
  out.scale = norm_a + norm_b;
  out.method = "parallel/range-sweep";

  // max |z| over the range set is the maximum of its support function.
  constexpr int kGrid = 720;
  const double step = 2.0 * std::numbers::pi / kGrid;
  std::vector<double> h(kGrid);
  parallel_for(h.size(), [&](std::size_t i) { h[i] = model.support(step * static_cast<double>(i)); });
  const auto best = std::max_element(h.begin(), h.end());
  double lo = step * static_cast<double>(best - h.begin()) - step;
  double hi = lo + 2.0 * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = model.support(x1), f2 = model.support(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = model.support(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = model.support(x2);
    }
  }
  const double theta = f1 >= f2 ? x1 : x2;
  out.evaluations = kGrid + 82;

  const Complex z = model.support_point(theta);
  const double reach = std::max({*best, f1, f2, std::abs(z)});
  out.margin = out.margin_lower = reach - norm_b;
  if (out.margin >= -tol.decide * out.scale) out.verdict = Verdict::kParallel;
  else if (out.margin < -tol.strict * out.scale) out.verdict = Verdict::kNotParallel;
  else out.verdict = Verdict::kBoundary;

  if (out.verdict == Verdict::kParallel) {
    const Complex lambda = std::abs(z) > 0 ? std::conj(z) / std::abs(z) : Complex(1.0);
    const double value = ky_fan_norm(a + lambda * b, k);
    out.certificates.emplace_back(ParallelWitness{lambda, value});
    if (value < norm_a + norm_b - tol.cert * std::max(1.0, out.scale))
      out.notes.push_back("||A + lambda B||_(k) falls short of ||A||_(k) + ||B||_(k)");
  }
  return out;
}

}  // namespace kyfan
