#include <algorithm>
#include <cmath>
#include <numbers>

#include "internal.hpp"
#include "kyfan/norms.hpp"
#include "kyfan/parallel.hpp"

namespace kyfan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_pair_shapes(const Matrix& a, const Matrix& b, int k) {
  require_square(a, "A");
  if (b.rows() != a.rows() || b.cols() != a.cols())
    throw Error(ErrorCode::kShapeMismatch, "B must have the shape of A");
  require_finite(b, "B");
  if (k < 1 || k > a.rows()) throw Error(ErrorCode::kKOutOfRange, "k must lie in 1..n");
}

void note_partition(const SubdifferentialFrame& frame, Decision& d) {
  const Cluster& c = frame.part.boundary_cluster();
  const RealVector& s = frame.svd.S;
  if (c.size() > 1 && s(c.begin) - s(c.end - 1) > 1e-12 * std::max(1.0, s(0)))
    d.notes.push_back("cluster_tol merged distinct singular values around s_k");
  const double tol = frame.part.cluster_tol;
  const bool near_above = c.begin > 0 && s(c.begin - 1) - s(c.begin) <= 100.0 * tol;
  const bool near_below = c.end < s.size() && s(c.end - 1) - s(c.end) <= 100.0 * tol;
  if (near_above || near_below) d.notes.push_back("a gap next to the s_k cluster is within 100x cluster_tol");
  if (frame.rank_ambiguous) {
    d.notes.push_back("s_k is within two decades of the rank threshold");
  }
}

// Verdict, margin and certificates shared by both pair routes once the margin
// is known.
void finish_pair(const Matrix& a, const Matrix& b, int k, const SubdifferentialFrame& frame,
                 const Tolerances& tol, ScalarField field, double theta_min, bool use_blocks,
                 std::uint64_t seed, Decision& d) {
  d.verdict = detail::classify(d.margin, d.margin_lower, d.scale, tol);
  if (frame.rank_ambiguous && d.verdict != Verdict::kBoundary) d.verdict = Verdict::kBoundary;

  if (d.verdict == Verdict::kNotOrthogonal) {
    if (auto v = detail::pair_violation(a, b, k, theta_min)) d.certificates.emplace_back(*v);
    else d.notes.push_back("descent along the violating direction is below floating-point resolution");
    return;
  }
  if (d.verdict != Verdict::kOrthogonal) return;

  if (use_blocks || frame.degenerate_zero) {
    if (field == ScalarField::kReal) {
      d.notes.push_back("no block certificate for the real-scalar criterion");
      return;
    }
    try {
      TWitnessResult w = detail::witness_T_from_frame(frame, b, tol, d.scale);
      d.certificates.emplace_back(std::move(w.t));
      d.certificates.emplace_back(std::move(w.g));
    } catch (const Error& e) {
      d.notes.push_back(std::string("T witness not found: ") + e.what());
    }
    return;
  }

  const RangeSetModel model = build_range_model(frame, b);
  Complex point = 0.0;
  if (field == ScalarField::kReal) {
    const Complex hi = model.support_point(0.0);
    const Complex lo = model.support_point(std::numbers::pi);
    const double span = hi.real() - lo.real();
    point = span > 0 ? hi + (lo - hi) * (hi.real() / span) : hi;
    point.real(0.0);
  }
  Rng rng(seed);
  double residual = 0.0;
  const double cert_tol = tol.cert * std::max(1.0, ky_fan_norm(b, k)) * 1e-2;
  if (auto w = detail::witness_for_point(frame, model, point, cert_tol, rng, &residual)) {
    w->real_field = field == ScalarField::kReal;
    d.certificates.emplace_back(std::move(*w));
  } else {
    d.notes.push_back("witness search failed, best residual " + std::to_string(residual));
  }
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kOrthogonal: return "ORTHOGONAL";
    case Verdict::kNotOrthogonal: return "NOT_ORTHOGONAL";
    case Verdict::kParallel: return "PARALLEL";
    case Verdict::kNotParallel: return "NOT_PARALLEL";
    case Verdict::kBoundary: return "BOUNDARY";
  }
  return "BOUNDARY";
}

std::string_view to_string(ScalarField f) { return f == ScalarField::kReal ? "real" : "complex"; }

namespace detail {

double envelope_min(double ta, double tb, Complex za, Complex zb) {
  auto envelope = [&](double t) {
    const Complex e = std::polar(1.0, t);
    return std::max((e * za).real(), (e * zb).real());
  };
  double best = std::min(envelope(ta), envelope(tb));
  auto consider = [&](double base) {
    for (double c = base + kTwoPi * std::ceil((ta - base) / kTwoPi); c <= tb; c += kTwoPi)
      best = std::min(best, envelope(c));
  };
  const Complex diff = za - zb;
  if (std::abs(diff) > 0) {
    consider(std::numbers::pi / 2 - std::arg(diff));
    consider(-std::numbers::pi / 2 - std::arg(diff));
  }
  if (std::abs(za) > 0) consider(std::numbers::pi - std::arg(za));
  if (std::abs(zb) > 0) consider(std::numbers::pi - std::arg(zb));
  return best;
}

SweepResult certified_sweep(const SweepEval& eval, double lipschitz, double accept_floor,
                            double reject_ceiling, int initial, int rounds) {
  std::vector<SweepSample> samples(static_cast<std::size_t>(initial));
  parallel_for(samples.size(), [&](std::size_t i) { samples[i] = eval(kTwoPi * i / initial); });
  SweepResult out;
  out.evaluations = initial;

  constexpr std::size_t kMaxSamples = 200000;
  for (int round = 0;; ++round) {
    // close the circle with a copy of the first sample at 2 pi
    SweepSample wrap = samples.front();
    wrap.theta = kTwoPi;
    samples.push_back(wrap);

    const auto best = std::min_element(samples.begin(), samples.end(),
                                       [](const auto& x, const auto& y) { return x.h < y.h; });
    out.min_value = best->h;
    out.theta_min = best->theta;

    std::vector<double> lower(samples.size() - 1);
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const SweepSample& a = samples[i];
      const SweepSample& b = samples[i + 1];
      const double lip = 0.5 * (a.h + b.h) - 0.5 * lipschitz * (b.theta - a.theta);
      lower[i] = std::max(lip, envelope_min(a.theta, b.theta, a.z, b.z));
    }
    out.lower_bound = std::min(out.min_value, *std::min_element(lower.begin(), lower.end()));

    const bool rejected = out.min_value < reject_ceiling;
    const bool accepted = out.lower_bound >= accept_floor;
    if (rejected || accepted || round >= rounds || samples.size() > kMaxSamples) {
      samples.pop_back();
      out.samples = std::move(samples);
      return out;
    }

    std::vector<double> mids;
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (lower[i] < accept_floor) mids.push_back(0.5 * (samples[i].theta + samples[i + 1].theta));
    samples.pop_back();

    std::vector<SweepSample> fresh(mids.size());
    parallel_for(fresh.size(), [&](std::size_t i) { fresh[i] = eval(mids[i]); });
    out.evaluations += static_cast<int>(fresh.size());
    std::vector<SweepSample> merged;
    merged.reserve(samples.size() + fresh.size());
    std::merge(samples.begin(), samples.end(), fresh.begin(), fresh.end(), std::back_inserter(merged),
               [](const auto& x, const auto& y) { return x.theta < y.theta; });
    samples = std::move(merged);
  }
}

Verdict classify(double margin, double margin_lower, double scale, const Tolerances& tol) {
  if (margin_lower >= -tol.decide * scale) return Verdict::kOrthogonal;
  if (margin < -tol.strict * scale) return Verdict::kNotOrthogonal;
  return Verdict::kBoundary;
}

double violation_slack(double norm_a, double norm_b, double coeff_abs) {
  return 1e-13 * (norm_a + coeff_abs * norm_b) + 1e-300;
}

LineMin line_minimize(const Matrix& a, const Matrix& d, int k, double t_max) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double t) { return ky_fan_norm(a + t * d, k); };
  double lo = 0.0, hi = t_max;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * t_max; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? LineMin{x1, f1} : LineMin{x2, f2};
}

std::optional<Violation> pair_violation(const Matrix& a, const Matrix& b, int k, double theta) {
  const double norm_a = ky_fan_norm(a, k);
  const double norm_b = ky_fan_norm(b, k);
  if (norm_b == 0.0) return std::nullopt;
  const Complex dir = std::polar(1.0, theta);
  const LineMin best = line_minimize(a, dir * b, k, 2.0 * norm_a / norm_b);
  const Complex lambda = best.t * dir;
  const double value = ky_fan_norm(a + lambda * b, k);
  if (value >= norm_a - violation_slack(norm_a, norm_b, best.t)) return std::nullopt;
  return Violation{{lambda}, value};
}

double pair_scale(const SubdifferentialFrame& frame, const Matrix& b) {
  return frame.svd.S.head(frame.k()).sum() + ky_fan_norm(b, frame.k());
}

}  // namespace detail

Matrix BlockPartition::boundary_stack(bool degenerate) const {
  if (!degenerate) return b22;
  Matrix out(b22.rows() + b32.rows(), b22.cols());
  out << b22, b32;
  return out;
}

BlockPartition build_blocks(const SubdifferentialFrame& frame, const Matrix& b) {
  const Matrix rotated = frame.svd.U.adjoint() * b * frame.svd.V;
  const int fixed = frame.part.fixed_count();
  const int mid = frame.part.boundary_dim();
  const int tail = frame.part.tail_count(frame.n());
  BlockPartition out;
  out.trace_b11 = rotated.topLeftCorner(fixed, fixed).trace();
  out.b22 = rotated.block(fixed, fixed, mid, mid);
  out.b32 = rotated.block(fixed + mid, fixed, tail, mid);
  return out;
}

RangeSetModel build_range_model(const SubdifferentialFrame& frame, const Matrix& b) {
  if (frame.degenerate_zero)
    throw Error(ErrorCode::kDegenerateRank, "range set model needs s_k > 0");
  RangeSetModel model;
  model.fixed_part = (frame.U1.adjoint() * b * frame.V1).trace();
  model.compression = frame.U2.adjoint() * b * frame.V2;
  model.m = frame.q();
  return model;
}

double RangeSetModel::support(double theta) const {
  const Complex e = std::polar(1.0, -theta);
  return (e * fixed_part).real() + top_q_eigsum(herm(e * compression), m).value;
}

Complex RangeSetModel::support_point(double theta, Matrix* frame) const {
  const Complex e = std::polar(1.0, -theta);
  const EigenFrame eig = hermitian_eig(herm(e * compression));
  const Matrix w = eig.vectors.leftCols(m);
  if (frame) *frame = w;
  return fixed_part + (w.adjoint() * compression * w).trace();
}

Decision check_pair(const Matrix& a, const Matrix& b, int k, ScalarField field,
                    const Tolerances& tol, std::uint64_t seed) {
  check_pair_shapes(a, b, k);
  const SubdifferentialFrame frame = build_frame(a, k, tol.cluster);
  Decision d;
  d.tolerances = tol;
  d.cluster_tol = frame.part.cluster_tol;
  d.scale = detail::pair_scale(frame, b);
  note_partition(frame, d);

  double theta_min = 0.0;
  if (frame.degenerate_zero) {
    // s_k = 0: K is the disk around tr B11 of radius ||[B22; B32]||_(q).
    const BlockPartition blocks = build_blocks(frame, b);
    const double radius = top_q_singsum(blocks.boundary_stack(true), frame.q());
    const Complex center = blocks.trace_b11;
    if (field == ScalarField::kComplex) {
      d.margin = radius - std::abs(center);
      theta_min = std::abs(center) > 0 ? std::numbers::pi - std::arg(center) : 0.0;
    } else {
      d.margin = radius - std::abs(center.real());
      theta_min = center.real() >= 0 ? std::numbers::pi : 0.0;
    }
    d.margin_lower = d.margin;
    d.method = "pair/zero-singular-disk";
    d.evaluations = 1;
  } else if (field == ScalarField::kReal) {
    const double h0 = directional_derivative(frame, b);
    const double hpi = directional_derivative(frame, Matrix(-b));
    d.margin = d.margin_lower = std::min(h0, hpi);
    theta_min = h0 <= hpi ? 0.0 : std::numbers::pi;
    d.method = "pair/real-scalar";
    d.evaluations = 2;
  } else {
    const detail::SweepEval eval = [&](double theta) {
      const Matrix x = std::polar(1.0, theta) * b;
      const SupportResult s = support_subgradient(frame, x);
      return detail::SweepSample{theta, s.value, (s.subgradient.adjoint() * b).trace()};
    };
    const double lipschitz = ky_fan_norm(b, k);
    const detail::SweepResult sweep = detail::certified_sweep(
        eval, lipschitz, -tol.decide * d.scale, -tol.strict * d.scale);
    d.margin = sweep.min_value;
    d.margin_lower = sweep.lower_bound;
    d.evaluations = sweep.evaluations;
    theta_min = sweep.theta_min;
    d.method = "pair/support-sweep";
  }
  finish_pair(a, b, k, frame, tol, field, theta_min, false, seed, d);
  return d;
}

Decision check_pair_blocks(const Matrix& a, const Matrix& b, int k, const Tolerances& tol) {
  check_pair_shapes(a, b, k);
  const SubdifferentialFrame frame = build_frame(a, k, tol.cluster);
  const BlockPartition blocks = build_blocks(frame, b);
  Decision d;
  d.tolerances = tol;
  d.cluster_tol = frame.part.cluster_tol;
  d.scale = detail::pair_scale(frame, b);
  note_partition(frame, d);

  double theta_min = 0.0;
  const int q = frame.q();
  if (frame.degenerate_zero) {
    // |tr B11| <= ||[B22; B32]||_(q)
    const double bound = top_q_singsum(blocks.boundary_stack(true), q);
    d.margin = d.margin_lower = bound - std::abs(blocks.trace_b11);
    theta_min = std::abs(blocks.trace_b11) > 0 ? std::numbers::pi - std::arg(blocks.trace_b11) : 0.0;
    d.method = "blocks/singular-fan";
    d.evaluations = 1;
  } else {
    // -tr B11 must lie in { tr(T B22) : 0 <= T <= I, tr T = q }.
    const Complex b11 = blocks.trace_b11;
    const Matrix& b22 = blocks.b22;
    const detail::SweepEval eval = [&](double theta) {
      const Complex e = std::polar(1.0, theta);
      const FanMaximum fan = top_q_eigsum(herm(e * b22), q);
      const double h = (e * b11).real() + fan.value;
      return detail::SweepSample{theta, h, b11 + (fan.maximizer * b22).trace()};
    };
    const double lipschitz = std::abs(b11) + top_q_singsum(b22, q);
    const detail::SweepResult sweep = detail::certified_sweep(
        eval, lipschitz, -tol.decide * d.scale, -tol.strict * d.scale);
    d.margin = sweep.min_value;
    d.margin_lower = sweep.lower_bound;
    d.evaluations = sweep.evaluations;
    theta_min = sweep.theta_min;
    d.method = "blocks/spectral-polytope-sweep";
  }
  finish_pair(a, b, k, frame, tol, ScalarField::kComplex, theta_min, true, 0, d);
  return d;
}

}  // namespace kyfan
