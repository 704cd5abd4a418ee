#pragma once

#include <functional>
#include <optional>

#include "kyfan/decide.hpp"

namespace kyfan::detail {

struct SweepSample {
  double theta = 0.0;
  double h = 0.0;
  Complex z;  // a point of K with Re(e^{i theta} z) = h
};

struct SweepResult {
  double min_value = 0.0;
  double theta_min = 0.0;
  double lower_bound = 0.0;
  int evaluations = 0;
  std::vector<SweepSample> samples;
};

using SweepEval = std::function<SweepSample(double theta)>;

/// Certified minimum of a support function h(theta) = max_{z in K} Re(e^{i theta} z)
/// over [0, 2 pi). Each interval is bounded below by both the Lipschitz bound
/// and the envelope of the two support points at its ends; intervals that
/// cannot be certified above accept_floor are bisected. Stops early once a
/// sample falls below reject_ceiling.
SweepResult certified_sweep(const SweepEval& eval, double lipschitz, double accept_floor,
                            double reject_ceiling, int initial = 256, int rounds = 20);

/// min over [ta, tb] of max(Re(e^{i t} za), Re(e^{i t} zb)).
double envelope_min(double ta, double tb, Complex za, Complex zb);

Verdict classify(double margin, double margin_lower, double scale, const Tolerances& tol);

/// Slack below ||A||_(k) that a claimed violation must clear; covers rounding
/// in the norm evaluations.
double violation_slack(double norm_a, double norm_b, double coeff_abs);

/// Minimizes t -> ||A + t D||_(k) on [0, t_max] (convex) by golden section.
struct LineMin {
  double t = 0.0;
  double value = 0.0;
};
LineMin line_minimize(const Matrix& a, const Matrix& d, int k, double t_max);

/// Violation certificate along the descent direction e^{i theta} B, when the
/// decrease is resolvable in floating point.
std::optional<Violation> pair_violation(const Matrix& a, const Matrix& b, int k, double theta);

struct FrameSolve {
  Matrix frame;  // m x q isometry
  double residual = 0.0;
};

/// Orthonormal q-frame W with tr(W^* C W) = target.
FrameSolve solve_frame_target(const Matrix& c, int q, Complex target, Rng& rng, double tol);

/// u = [V1, V2 w]: witness vectors in the original coordinates.
WitnessSystem assemble_witness(const SubdifferentialFrame& frame, const Matrix& w);

/// Witness vectors for a nondegenerate frame whose range set contains
/// `point`; nullopt when the search misses tol.
std::optional<WitnessSystem> witness_for_point(const SubdifferentialFrame& frame,
                                               const RangeSetModel& model, Complex point,
                                               double tol, Rng& rng, double* residual = nullptr);

struct TSolve {
  Matrix t;
  double residual = 0.0;
  double distance_lower = 0.0;
  bool converged = false;
};

/// min |b11 + tr(T^* M)| over the spectral set, by min-norm-point Frank-Wolfe.
TSolve solve_block_feasibility(Complex b11, const Matrix& m, int q, bool general, double target);

TWitnessResult witness_T_from_frame(const SubdifferentialFrame& frame, const Matrix& b,
                                    const Tolerances& tol, double scale);

double pair_scale(const SubdifferentialFrame& frame, const Matrix& b);

}  // namespace kyfan::detail
