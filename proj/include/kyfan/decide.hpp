#pragma once

// Decision procedures for Birkhoff-James orthogonality in the Ky Fan k-norms,
// with certificates that can be re-checked independently.
//
// A is orthogonal to B iff 0 lies in K = { tr(G^* B) : G in dg(A) }, a compact
// convex subset of the plane. Its support function in direction e^{i theta}
// is the directional derivative g'_+(A, e^{i theta} B), so the signed
// distance of 0 from the boundary of K is min_theta g'_+(A, e^{i theta} B).

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kyfan/linalg.hpp"
#include "kyfan/subdiff.hpp"

namespace kyfan {

enum class Verdict { kOrthogonal, kNotOrthogonal, kParallel, kNotParallel, kBoundary };
enum class ScalarField { kReal, kComplex };

std::string_view to_string(Verdict v);
std::string_view to_string(ScalarField f);

/// Decision thresholds. `decide` and `strict` are relative to
/// ||A||_(k) + ||B||_(k); `cert` bounds certificate residuals.
struct Tolerances {
  double decide = 1e-7;
  double strict = 1e-6;
  double cert = 1e-7;
  std::optional<double> cluster;  // default 1e-8 * max(s_1, 1)
};

/// k orthonormal vectors u_i with |A| u_i = s_i u_i and
/// sum <u_i, U^* B u_i> = 0 (only its real part when real_field is set).
struct WitnessSystem {
  Matrix vectors;  // n x k
  Matrix polar;    // the polar factor U used
  bool real_field = false;
};

/// Feasibility matrix T for the block criterion, together with the SVD frame
/// that defines the blocks.
struct WitnessT {
  Matrix t;
  Matrix u;
  Matrix v;
  int q = 1;
  int r = 0;
  bool general = false;  // s_k = 0 branch: T is (n-k+q) x (r+q), s_1(T) <= 1, sum s_j(T) <= q
};

/// Dual certificate: ||G||_inf <= 1, ||G||_1 <= k, tr(G^* A) = ||A||_(k),
/// tr(G^* B) = 0.
struct WitnessG {
  Matrix g;
};

/// Density matrices P_1..P_k with ||sum P_i||_inf <= 1, |A| P_i = s_i P_i and
/// U sum P_i orthogonal to the subspace.
struct WitnessDensity {
  std::vector<Matrix> densities;
  Matrix polar;
};

/// Coefficients c with ||A + sum c_j B_j||_(k) < ||A||_(k); for a pair the
/// single coefficient is the scalar lambda.
struct Violation {
  std::vector<Complex> coefficients;
  double norm_value = 0.0;
};

/// Unimodular lambda with ||A + lambda B||_(k) = ||A||_(k) + ||B||_(k).
struct ParallelWitness {
  Complex lambda;
  double norm_value = 0.0;
};

using Certificate =
    std::variant<WitnessSystem, WitnessT, WitnessG, WitnessDensity, Violation, ParallelWitness>;

std::string_view kind_name(const Certificate& cert);

struct Decision {
  Verdict verdict = Verdict::kBoundary;
  double margin = 0.0;        // best estimate of the signed distance
  double margin_lower = 0.0;  // certified lower bound on the margin
  double scale = 1.0;         // ||A||_(k) + ||B||_(k); thresholds are relative to it
  std::string method;
  Tolerances tolerances;
  double cluster_tol = 0.0;
  bool degenerate_rank = false;
  std::vector<Certificate> certificates;
  std::vector<std::string> notes;
  int evaluations = 0;
};

/// W(U^* B, |A|) = fixed_part + W_q(compression): the forced traces over
/// eigenclusters of |A| inside the top k plus the q-numerical range of the
/// compression of U^* B to the boundary cluster (coordinates in V).
struct RangeSetModel {
  Complex fixed_part;
  Matrix compression;
  int m = 1;

  /// max { Re(e^{-i theta} z) : z in the set } and a maximizing point.
  double support(double theta) const;
  Complex support_point(double theta, Matrix* frame = nullptr) const;
};

RangeSetModel build_range_model(const SubdifferentialFrame& frame, const Matrix& b);

/// U^* B V cut along the (k-q, r+q, n-k-r) split.
struct BlockPartition {
  Complex trace_b11;
  Matrix b22;
  Matrix b32;
  /// [B22; B32] when s_k = 0, else B22.
  Matrix boundary_stack(bool degenerate) const;
};

BlockPartition build_blocks(const SubdifferentialFrame& frame, const Matrix& b);

Decision check_pair(const Matrix& a, const Matrix& b, int k, ScalarField field,
                    const Tolerances& tol = {}, std::uint64_t seed = 0);

Decision check_pair_blocks(const Matrix& a, const Matrix& b, int k, const Tolerances& tol = {});

/// Orthonormal eigenvectors u_i of |A| with sum <u_i, U^* B u_i> = 0. Throws NotOrthogonal,
/// DegenerateRank or WitnessSearchFailed.
WitnessSystem find_witness_system(const Matrix& a, const Matrix& b, int k, const Tolerances& tol,
                                  Rng& rng);

struct TWitnessResult {
  WitnessT t;
  WitnessG g;
  double residual = 0.0;
};

/// Feasible T solving tr B11 + tr(T^* B22) = 0 (or its s_k = 0 analogue),
/// plus the assembled dual certificate G. Throws NotOrthogonal or NoConvergence.
TWitnessResult find_witness_T(const Matrix& a, const Matrix& b, int k, const Tolerances& tol = {});

Decision check_subspace(const Matrix& a, std::span<const Matrix> basis, int k,
                        const Tolerances& tol = {});

/// Splits Q along the eigenclusters of |A| into density matrices P_i with
/// sum P_i = Q. Throws BadBlockStructure when Q leaks across clusters.
WitnessDensity extract_density(const Matrix& q, const SvdFrame& svd, const SpectralPartition& part,
                               double tol = 1e-8);

Decision check_parallel(const Matrix& a, const Matrix& b, int k, const Tolerances& tol = {});

struct ClauseResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  bool pass = true;
  std::string kind;
  std::vector<ClauseResult> clauses;

  /// First failing clause, empty when everything passed.
  std::string first_failure() const;
};

/// Re-checks every clause of the condition a certificate claims. `others` is
/// {B} for pair certificates and the spanning set for subspace certificates.
VerificationReport verify_certificate(const Certificate& cert, const Matrix& a,
                                      std::span<const Matrix> others, int k, double tol = 1e-7);

/// Adds `amount` to every real entry of the payload (used to exercise the
/// verifier's failure paths).
Certificate tamper(const Certificate& cert, double amount = 1e-2);

}  // namespace kyfan
