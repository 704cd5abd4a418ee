// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kyfan/commands.hpp"
#include "kyfan/decide.hpp"
#include "kyfan/generate.hpp"
#include "kyfan/io.hpp"
#include "kyfan/norms.hpp"
#include "kyfan/oracle.hpp"
#include "kyfan/subdiff.hpp"
#include "support.hpp"

using namespace kyfan;
namespace fs = std::filesystem;

namespace {

struct Tally {
  int instances = 0;
  int failures = 0;
  int excluded = 0;
  double worst = 0.0;
  std::vector<std::string> examples;

  void fail(const std::string& what) {
    ++failures;
    if (examples.size() < 5) examples.push_back(what);
  }
  void residual(double r) { worst = std::max(worst, r); }
};

// A decision whose certificates go through the CLI verifier in the last criterion.
struct Emitted {
  std::string mode;
  ProblemFile problem;
  Decision decision;
};

std::vector<Emitted> emitted;

void emit(const std::string& mode, const Matrix& a, std::span<const Matrix> others, int k,
          const Decision& d, bool named_basis) {
  if (d.certificates.empty()) return;
  Emitted e;
  e.mode = mode;
  e.problem.matrices["A"] = a;
  e.problem.k = k;
  if (named_basis) {
    for (std::size_t j = 0; j < others.size(); ++j) {
      const std::string name = "W" + std::to_string(j + 1);
      e.problem.matrices[name] = others[j];
      e.problem.subspace.push_back(name);
    }
  } else {
    e.problem.matrices["B"] = others[0];
  }
  e.decision = d;
  emitted.push_back(std::move(e));
}

bool is_boundary(Verdict v) { return v == Verdict::kBoundary; }

Verdict from_oracle(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::kOrthogonal:
    case OracleVerdict::kNoCounterexample: return Verdict::kOrthogonal;
    case OracleVerdict::kNotOrthogonal: return Verdict::kNotOrthogonal;
    case OracleVerdict::kBoundary: return Verdict::kBoundary;
  }
  return Verdict::kBoundary;
}

std::string describe(const char* family, int k, int index, Verdict engine, Verdict other) {
  std::ostringstream s;
  s << family << " k=" << k << " #" << index << ": " << to_string(engine) << " vs " << to_string(other);
  return s.str();
}

bool report(int id, const char* title, const Tally& t, const std::string& extra = "") {
  const bool pass = t.failures == 0 && t.instances > 0;
  std::printf("criterion %d %s: %s (%d checked, %d failed, %d excluded, worst residual %.3g%s%s)\n", id, title,
              pass ? "PASS" : "FAIL", t.instances, t.failures, t.excluded, t.worst, extra.empty() ? "" : ", ",
              extra.c_str());
  for (const std::string& e : t.examples) std::printf("    %s\n", e.c_str());
  std::fflush(stdout);
  return pass;
}

// Singular A of rank r < k: s_k = 0.
Matrix low_rank(int n, int r, Rng& rng) { return random_gaussian(n, r, rng) * random_gaussian(r, n, rng); }

// ||A + t X||_(k) family: generic, clustered spectrum, low rank.
Matrix mixed_a(int n, int k, int variant, Rng& rng) {
  switch (variant % 3) {
    case 0: return random_gaussian(n, n, rng);
    case 1: return matrix_with_spectrum(random_spectrum(n, k, true, rng), rng);
    default: return low_rank(n, std::max(1, n / 2), rng);
  }
}

struct PairInstance {
  Matrix a, b;
  int k;
  const char* family;
};

// 4x4 pairs for each k: plain Gaussian, clustered A with Gaussian B,
// generator orthogonal, generator non-orthogonal.
std::vector<PairInstance> pair_instances(Rng& rng) {
  std::vector<PairInstance> out;
  for (int k = 1; k <= 4; ++k) {
    for (int i = 0; i < 220; ++i) {
      PairInstance p{Matrix(), Matrix(), k, ""};
      switch (i % 4) {
        case 0:
          p.a = random_gaussian(4, 4, rng);
          p.b = random_gaussian(4, 4, rng);
          p.family = "gaussian";
          break;
        case 1:
          p.a = matrix_with_spectrum(random_spectrum(4, k, true, rng), rng);
          p.b = random_gaussian(4, 4, rng);
          p.family = "clustered";
          break;
        case 2: {
          const Instance inst = generate_instance(4, k, InstanceKind::kOrthogonal, rng);
          p.a = inst.a;
          p.b = inst.b;
          p.family = "orthogonal";
          break;
        }
        default: {
          const Instance inst = generate_instance(4, k, InstanceKind::kNonOrthogonal, rng);
          p.a = inst.a;
          p.b = inst.b;
          p.family = "nonorthogonal";
          break;
        }
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

bool criterion_1_and_2(Rng& rng, bool& second) {
  const std::vector<PairInstance> pairs = pair_instances(rng);
  Tally oracle, cross;
  int boundary = 0;
  int orthogonal = 0, singular_orthogonal = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairInstance& p = pairs[i];
    const Matrix bs[] = {p.b};
    const Decision d = check_pair(p.a, p.b, p.k, ScalarField::kComplex, {}, i);
    emit("pair", p.a, bs, p.k, d, false);
    orthogonal += d.verdict == Verdict::kOrthogonal;
    GridSpec spec;
    spec.seed = i;
    const Verdict o = from_oracle(oracle_check_pair(p.a, p.b, p.k, spec));
    ++oracle.instances;
    if (is_boundary(d.verdict) || is_boundary(o)) {
      ++oracle.excluded;
      ++boundary;
    } else if (d.verdict != o) {
      oracle.fail(describe(p.family, p.k, static_cast<int>(i), d.verdict, o));
    }

    const Decision blocks = check_pair_blocks(p.a, p.b, p.k);
    emit("blocks", p.a, bs, p.k, blocks, false);
    ++cross.instances;
    if (blocks.verdict != d.verdict) cross.fail(describe(p.family, p.k, static_cast<int>(i), d.verdict, blocks.verdict));
  }
  const double boundary_share = static_cast<double>(boundary) / static_cast<double>(pairs.size());
  if (boundary_share >= 0.05) oracle.fail("BOUNDARY share " + std::to_string(boundary_share) + " is not below 5%");
  const bool first =
      report(1, "oracle agreement", oracle, std::to_string(orthogonal) + " orthogonal verdicts");

  // s_k = 0: blocks against the oracle. Half the B's are shifted so that
  // tr B11 = 0, which makes them orthogonal.
  for (int i = 0; i < 200; ++i) {
    const int n = 4;
    const int k = 2 + i % 3;
    const int r = 1 + i % (k - 1);
    const Matrix a = low_rank(n, r, rng);
    Matrix b = random_gaussian(n, n, rng);
    if (i % 2) {
      Eigen::JacobiSVD<Matrix> ref(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Matrix u1 = ref.matrixU().leftCols(r);
      const Matrix v1 = ref.matrixV().leftCols(r);
      b -= (u1.adjoint() * b * v1).trace() / static_cast<double>(r) * u1 * v1.adjoint();
    }
    const Matrix bs[] = {b};
    const Decision blocks = check_pair_blocks(a, b, k);
    emit("blocks", a, bs, k, blocks, false);
    singular_orthogonal += blocks.verdict == Verdict::kOrthogonal;
    GridSpec spec;
    spec.seed = 1000 + i;
    const Verdict o = from_oracle(oracle_check_pair(a, b, k, spec));
    ++cross.instances;
    if (is_boundary(blocks.verdict) || is_boundary(o)) ++cross.excluded;
    else if (blocks.verdict != o) cross.fail(describe("singular", k, i, blocks.verdict, o));
  }
  second = report(2, "pair and block criteria agree", cross,
                  std::to_string(singular_orthogonal) + " of 200 singular instances orthogonal");
  return first;
}

bool criterion_3(Rng& rng) {
  Tally t;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 5;
    const Instance inst = generate_instance(n, 1, InstanceKind::kOrthogonal, rng);
    const Decision d = check_pair(inst.a, inst.b, 1, ScalarField::kComplex, {}, i);
    const Matrix bs[] = {inst.b};
    emit("pair", inst.a, bs, 1, d, false);
    ++t.instances;
    const WitnessSystem* w = nullptr;
    for (const Certificate& c : d.certificates)
      if (const auto* p = std::get_if<WitnessSystem>(&c)) w = p;
    if (d.verdict != Verdict::kOrthogonal || !w) {
      t.fail("n=" + std::to_string(n) + " #" + std::to_string(i) + ": no witness vector");
      continue;
    }
    const Vector u = w->vectors.col(0);
    const double s1 = test::reference_singular_values(inst.a)(0);
    const Vector au = inst.a * u;
    const double norm_gap = std::abs(au.norm() - s1);
    const double inner = std::abs(au.dot(inst.b * u));
    const double unit = std::abs(u.norm() - 1.0);
    const double r = std::max({norm_gap, inner, unit});
    t.residual(r);
    if (r > 1e-7) t.fail("#" + std::to_string(i) + ": residual " + std::to_string(r));
  }
  return report(3, "k=1 witness vector", t);
}

bool criterion_4(Rng& rng) {
  Tally t;
  std::uniform_real_distribution<double> unit(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const int n = 3 + i % 3;
    const int r = 1 + i % (n - 1);
    const Matrix a = low_rank(n, r, rng);
    Eigen::JacobiSVD<Matrix> ref(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix w = ref.matrixU();
    const Matrix v = ref.matrixV();
    Matrix m = random_gaussian(n, n, rng);
    m.topLeftCorner(r, r) *= unit(rng);
    const Matrix b = w * m * v.adjoint();

    // Independent reference: tr over the range of A against the trace norm
    // of the null-space block.
    const Matrix rotated = w.adjoint() * b * v;
    const double b11 = std::abs(rotated.topLeftCorner(r, r).trace());
    const double b22 = test::reference_singular_values(rotated.bottomRightCorner(n - r, n - r)).sum();
    const double gap = b22 - b11;

    const Decision d = check_pair(a, b, n, ScalarField::kComplex);
    const Matrix bs[] = {b};
    emit("pair", a, bs, n, d, false);
    ++t.instances;
    if (std::abs(gap) <= 1e-7 * d.scale) {
      ++t.excluded;
      continue;
    }
    const Verdict expected = gap > 0 ? Verdict::kOrthogonal : Verdict::kNotOrthogonal;
    t.residual(std::abs(d.margin - gap));
    if (d.verdict != expected) t.fail(describe("trace-norm", n, i, d.verdict, expected));
  }
  return report(4, "trace norm block criterion", t);
}

bool criterion_5(Rng& rng) {
  Tally t;
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + i % 4;
    const int k = 1 + (i / 4) % n;
    const Matrix a = mixed_a(n, k, i / 16, rng);
    const Matrix x = random_gaussian(n, n, rng);
    const double closed = directional_derivative(a, k, x);
    const double fd = fd_directional(a, x, k, 1e-6);
    const double half = fd_directional(a, x, k, 5e-7);
    // Richardson combination of t and t/2 removes the O(t) curvature term,
    // which dominates near small spectral gaps.
    const double estimate = 2.0 * half - fd;
    ++t.instances;
    t.residual(std::abs(estimate - closed));
    if (std::abs(estimate - closed) > 1e-4)
      t.fail("#" + std::to_string(i) + ": |fd - closed| = " + std::to_string(estimate - closed));
    if (fd < half - 1e-9 || half < closed - 1e-9) t.fail("#" + std::to_string(i) + ": difference quotient not monotone");
  }
  return report(5, "directional derivative", t);
}

bool criterion_6(Rng& rng) {
  Tally t;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 4;
    const int k = 1 + (i / 4) % n;
    const Matrix a = mixed_a(n, k, i / 8, rng);
    const Matrix g = sample_subgradient(a, k, rng);
    ++t.instances;
    if (!subgradient_membership(a, k, g, 1e-8)) t.fail("#" + std::to_string(i) + ": membership rejected");

    // the same three conditions from an independent SVD
    const RealVector sg = test::reference_singular_values(g);
    const double spectral = sg(0) - 1.0;
    const double trace = sg.sum() - k;
    const double norming = test::reference_ky_fan(a, k) - (g.adjoint() * a).trace().real();
    t.residual(std::max({spectral, trace, norming, 0.0}));
    if (spectral > 1e-8 || trace > 1e-8 || norming > 1e-8)
      t.fail("#" + std::to_string(i) + ": reference check failed");

    for (int s = 0; s < 4; ++s) {
      const Matrix x = random_gaussian(n, n, rng);
      const double pairing = std::abs((g.adjoint() * x).trace()) - test::reference_ky_fan(x, k);
      if (pairing > 1e-9) t.fail("#" + std::to_string(i) + ": pairing exceeds the norm by " + std::to_string(pairing));
    }
  }
  return report(6, "subgradient membership and pairing", t);
}

bool criterion_7(Rng& rng) {
  Tally t;
  double worst_slack = INFINITY;
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + i % 3;
    const int k = 1 + i % n;
    const Matrix a = matrix_with_spectrum(random_spectrum(n, k, i % 2 == 0, rng), rng);
    const Matrix b = random_gaussian(n, n, rng);
    const std::vector<Complex> pts = sample_range_points(a, b, k, 40, rng);
    std::vector<double> support(64);
    for (int j = 0; j < 64; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / 64;
      support[j] = directional_derivative(a, k, Matrix(std::polar(1.0, -theta) * b));
    }
    for (int m = 0; m < 20; ++m) {
      const Complex mid = 0.5 * (pts[2 * m] + pts[2 * m + 1]);
      ++t.instances;
      double slack = INFINITY;
      for (int j = 0; j < 64; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / 64;
        slack = std::min(slack, support[j] - (std::polar(1.0, -theta) * mid).real());
      }
      worst_slack = std::min(worst_slack, slack);
      if (slack < -1e-7) t.fail("instance " + std::to_string(i) + ": slack " + std::to_string(slack));
    }
  }
  t.worst = std::max(0.0, -worst_slack);
  char slack[32];
  std::snprintf(slack, sizeof slack, "min slack %.3g", worst_slack);
  return report(7, "convexity of the range set", t, slack);
}

bool criterion_8(Rng& rng) {
  Tally t;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 4;
    const int k = 1 + (i / 4) % n;
    const int dim = 1 + (i / 2) % 5;
    const Instance inst = generate_instance(n, k, InstanceKind::kSubspace, rng, dim);
    const Decision d = check_subspace(inst.a, inst.basis, k);
    emit("subspace", inst.a, inst.basis, k, d, true);
    ++t.instances;
    const WitnessDensity* w = nullptr;
    for (const Certificate& c : d.certificates)
      if (const auto* p = std::get_if<WitnessDensity>(&c)) w = p;
    if (d.verdict != Verdict::kOrthogonal || !w) {
      t.fail("generator #" + std::to_string(i) + ": " + std::string(to_string(d.verdict)));
      continue;
    }
    if (!verify_certificate(*w, inst.a, inst.basis, k, 1e-6).pass) t.fail("generator #" + std::to_string(i) + ": verifier");

    // independent check of the displayed conditions
    Eigen::JacobiSVD<Matrix> ref(inst.a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector s = ref.singularValues();
    const Matrix abs_a = ref.matrixV() * s.cast<Complex>().asDiagonal() * ref.matrixV().adjoint();
    double r = (w->polar * abs_a - inst.a).cwiseAbs().maxCoeff();
    r = std::max(r, (w->polar.adjoint() * w->polar - Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
    Matrix sum = Matrix::Zero(n, n);
    for (int j = 0; j < k && j < static_cast<int>(w->densities.size()); ++j) {
      const Matrix& p = w->densities[j];
      sum += p;
      r = std::max(r, (abs_a * p - s(j) * p).cwiseAbs().maxCoeff());
      r = std::max(r, std::abs(p.trace() - 1.0));
      Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix((p + p.adjoint()) / 2.0));
      r = std::max(r, -eig.eigenvalues().minCoeff());
    }
    if (static_cast<int>(w->densities.size()) != k) r = INFINITY;
    r = std::max(r, test::reference_singular_values(sum)(0) - 1.0);
    const Matrix us = w->polar * sum;
    for (const Matrix& m : inst.basis) r = std::max(r, std::abs((m.adjoint() * us).trace()) / std::max(1.0, m.norm()));
    t.residual(r);
    if (r > 1e-6) t.fail("generator #" + std::to_string(i) + ": residual " + std::to_string(r));
  }

  for (int i = 0; i < 200; ++i) {
    const int k = 1 + i % 4;
    Matrix a, b;
    if (i % 2) {
      const Instance inst = generate_instance(4, k, InstanceKind::kOrthogonal, rng);
      a = inst.a;
      b = inst.b;
    } else {
      a = matrix_with_spectrum(random_spectrum(4, k, true, rng), rng);
      b = random_gaussian(4, 4, rng);
    }
    const Matrix basis[] = {b};
    const Decision sub = check_subspace(a, basis, k);
    emit("subspace", a, basis, k, sub, false);
    const Decision pair = check_pair(a, b, k, ScalarField::kComplex, {}, i);
    ++t.instances;
    if (is_boundary(sub.verdict) || is_boundary(pair.verdict)) ++t.excluded;
    else if (sub.verdict != pair.verdict) t.fail(describe("single-basis", k, i, sub.verdict, pair.verdict));
  }
  return report(8, "subspace densities", t);
}

bool criterion_9(Rng& rng) {
  Tally t;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 4;
    const int k = 1 + (i / 4) % n;
    Matrix a, b;
    if (i % 2) {
      const Instance inst = generate_instance(n, k, InstanceKind::kParallel, rng);
      a = inst.a;
      b = inst.b;
    } else {
      a = matrix_with_spectrum(random_spectrum(n, k, false, rng), rng);
      b = std::polar(0.2 + 2.0 * unit(rng), 2.0 * std::numbers::pi * unit(rng)) * a;
    }
    const Decision d = check_parallel(a, b, k);
    const Matrix bs[] = {b};
    emit("parallel", a, bs, k, d, false);
    ++t.instances;
    const ParallelWitness* w = nullptr;
    for (const Certificate& c : d.certificates)
      if (const auto* p = std::get_if<ParallelWitness>(&c)) w = p;
    if (d.verdict != Verdict::kParallel || !w) {
      t.fail("constructed #" + std::to_string(i) + ": " + std::string(to_string(d.verdict)));
      continue;
    }
    const double gap = std::abs(test::reference_ky_fan(a + w->lambda * b, k) - test::reference_ky_fan(a, k) -
                                test::reference_ky_fan(b, k));
    const double r = std::max(gap, std::abs(std::abs(w->lambda) - 1.0));
    t.residual(r);
    if (r > 1e-7) t.fail("constructed #" + std::to_string(i) + ": residual " + std::to_string(r));
  }

  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 4;
    const int k = 1 + (i / 4) % n;
    const Matrix a = random_gaussian(n, n, rng);
    const Matrix b = random_gaussian(n, n, rng);
    const Decision d = check_parallel(a, b, k);
    const Matrix bs[] = {b};
    emit("parallel", a, bs, k, d, false);
    const ParallelProbe probe = oracle_parallel_grid(a, b, k);
    const double scale = test::reference_ky_fan(a, k) + test::reference_ky_fan(b, k);
    ++t.instances;
    Verdict referee = Verdict::kBoundary;
    if (probe.margin >= -1e-7 * scale) referee = Verdict::kParallel;
    else if (probe.margin < -1e-6 * scale) referee = Verdict::kNotParallel;
    if (is_boundary(referee) || is_boundary(d.verdict)) ++t.excluded;
    else if (referee != d.verdict) t.fail(describe("random", k, i, d.verdict, referee));
  }
  return report(9, "norm parallelism", t);
}

bool criterion_10() {
  Tally t;
  int certificates = 0;
  const fs::path dir = fs::temp_directory_path() / "kyfan_acceptance";
  fs::create_directories(dir);
  const std::string problem_path = (dir / "problem.json").string();
  const std::string report_path = (dir / "report.json").string();
  std::ostringstream sink;
  for (std::size_t i = 0; i < emitted.size(); ++i) {
    const Emitted& e = emitted[i];
    write_text(problem_path, dump_problem(e.problem));
    ReportFile r;
    r.mode = e.mode;
    r.k = e.problem.k;
    r.decision = e.decision;
    write_text(report_path, dump_report(r));
    ++t.instances;
    certificates += static_cast<int>(e.decision.certificates.size());
    if (cmd_verify(report_path, problem_path, sink, sink) != kExitPositive)
      t.fail(e.mode + " decision #" + std::to_string(i) + ": verify rejected the certificate");
    for (const Certificate& c : e.decision.certificates) {
      ReportFile bad = r;
      bad.decision.certificates = {tamper(c)};
      write_text(report_path, dump_report(bad));
      if (cmd_verify(report_path, problem_path, sink, sink) != kExitNegative)
        t.fail(e.mode + " decision #" + std::to_string(i) + ": tampered " + std::string(kind_name(c)) + " accepted");
    }
  }
  return report(10, "certificate loop", t, std::to_string(certificates) + " certificates");
}

}  // namespace

int main() {
  Rng rng(20240611);
  bool ok = true;
  bool second = false;
  ok &= criterion_1_and_2(rng, second);
  ok &= second;
  ok &= criterion_3(rng);
  ok &= criterion_4(rng);
  ok &= criterion_5(rng);
  ok &= criterion_6(rng);
  ok &= criterion_7(rng);
  ok &= criterion_8(rng);
  ok &= criterion_9(rng);
  ok &= criterion_10();
  std::printf("acceptance: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}
