#include "kyfan/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "kyfan/generate.hpp"
#include "kyfan/io.hpp"
#include "kyfan/norms.hpp"
#include "kyfan/oracle.hpp"

namespace kyfan {

namespace {

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

int exit_for_error(const Error& e, std::ostream& err) {
  err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
  switch (e.code()) {
    case ErrorCode::kParse:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kKOutOfRange:
    case ErrorCode::kQOutOfRange:
    case ErrorCode::kNonFinite:
    case ErrorCode::kNotHermitian: return kExitParse;
    case ErrorCode::kDegenerateRank: return kExitDegenerate;
    default: return kExitBoundary;
  }
}

template <typename F>
int run_guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return exit_for_error(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
}

// Matrices a certificate from `mode` is checked against.
std::vector<Matrix> counterparts(const ProblemFile& p, const std::string& mode) {
  if (mode == "subspace") {
    if (!p.subspace.empty()) return p.subspace_basis();
    return {p.matrix("B")};
  }
  return {p.matrix("B")};
}

void print_report(const VerificationReport& r, std::ostream& out) {
  out << "  certificate " << r.kind << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
  for (const ClauseResult& c : r.clauses)
    out << "    " << c.name << "  residual " << fmt12(c.residual) << "  tol " << fmt12(c.tolerance)
        << (c.pass ? "" : "  FAILED") << "\n";
}

}  // namespace

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::kOrthogonal:
    case Verdict::kParallel: return kExitPositive;
    case Verdict::kNotOrthogonal:
    case Verdict::kNotParallel: return kExitNegative;
    case Verdict::kBoundary: return kExitBoundary;
  }
  return kExitBoundary;
}

int cmd_norm(const std::string& file, std::optional<int> k, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const ProblemFile p = parse_problem(read_text(file));
    const Matrix& a = p.matrix("A");
    const int kk = k.value_or(p.k);
    out << fmt12(ky_fan_norm(a, kk)) << "\n";
    const RealVector s = singular_values(a);
    out << "singular values:";
    for (double v : s) out << " " << fmt12(v);
    out << "\n";
    return 0;
  });
}

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const ProblemFile p = parse_problem(read_text(o.file));
    Tolerances tol = p.tolerances();
    if (o.tol_decide) tol.decide = *o.tol_decide;
    if (o.tol_strict) tol.strict = *o.tol_strict;
    if (o.cluster_tol) tol.cluster = *o.cluster_tol;
    const int k = o.k.value_or(p.k);
    const ScalarField field = o.field.value_or(p.field);
    const std::uint64_t seed = o.seed.value_or(p.seed.value_or(0));
    const Matrix& a = p.matrix("A");

    const auto start = std::chrono::steady_clock::now();
    Decision d;
    std::vector<Matrix> others;
    if (o.mode == "pair") {
      others = {p.matrix("B")};
      d = check_pair(a, others[0], k, field, tol, seed);
    } else if (o.mode == "blocks") {
      others = {p.matrix("B")};
      d = check_pair_blocks(a, others[0], k, tol);
    } else if (o.mode == "subspace") {
      others = counterparts(p, "subspace");
      d = check_subspace(a, others, k, tol);
    } else if (o.mode == "parallel") {
      others = {p.matrix("B")};
      d = check_parallel(a, others[0], k, tol);
    } else {
      throw Error(ErrorCode::kParse, "unknown mode '" + o.mode + "'");
    }
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    ReportFile report;
    report.mode = o.mode;
    report.k = k;
    report.field = field;
    report.seed = seed;
    report.elapsed_ms = elapsed;
    for (const Certificate& c : d.certificates)
      report.checks.push_back(verify_certificate(c, a, others, k, tol.cert));
    report.decision = d;

    out << to_string(d.verdict) << "\n";
    out << "  margin " << fmt12(d.margin) << " (certified lower " << fmt12(d.margin_lower)
        << ", scale " << fmt12(d.scale) << ")\n";
    out << "  method " << d.method << ", cluster_tol " << fmt12(d.cluster_tol) << "\n";
    for (const std::string& n : d.notes) out << "  note: " << n << "\n";
    for (const VerificationReport& r : report.checks) print_report(r, out);
    if (o.json_out) write_text(*o.json_out, dump_report(report));

    if (o.mode == "subspace" && d.degenerate_rank && d.verdict == Verdict::kBoundary)
      return static_cast<int>(kExitDegenerate);
    return exit_code_for(d.verdict);
  });
}

int cmd_verify(const std::string& report_file, const std::string& problem_file, std::ostream& out,
               std::ostream& err) {
  return run_guarded(err, [&] {
    const ReportFile r = parse_report(read_text(report_file));
    const ProblemFile p = parse_problem(read_text(problem_file));
    const Matrix& a = p.matrix("A");
    const std::vector<Matrix> others = counterparts(p, r.mode);
    if (r.decision.certificates.empty()) {
      out << "FAIL: the report carries no certificate\n";
      return static_cast<int>(kExitNegative);
    }
    bool pass = true;
    for (const Certificate& c : r.decision.certificates) {
      const VerificationReport v = verify_certificate(c, a, others, r.k, r.decision.tolerances.cert);
      print_report(v, out);
      pass = pass && v.pass;
    }
    out << (pass ? "PASS" : "FAIL") << "\n";
    return static_cast<int>(pass ? kExitPositive : kExitNegative);
  });
}

int cmd_gen(const GenOptions& o, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const auto kind = parse_instance_kind(o.kind);
    if (!kind) throw Error(ErrorCode::kParse, "unknown kind '" + o.kind + "'");
    Rng rng(o.seed);
    const Instance inst = generate_instance(o.n, o.k, *kind, rng, o.dim);
    const std::string text = dump_problem(to_problem(inst, o.seed));
    if (o.out_file) write_text(*o.out_file, text);
    else out << text;
    return 0;
  });
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    const ProblemFile p = parse_problem(read_text(o.file));
    const Matrix& a = p.matrix("A");
    const Matrix& b = p.matrix("B");
    const int k = o.k.value_or(p.k);
    const SubdifferentialFrame frame = build_frame(a, k, p.cluster_tol);
    const Complex fixed = build_blocks(frame, b).trace_b11;

    std::ostringstream csv;
    csv.precision(17);
    csv << "theta,h,fixed_re,fixed_im\n";
    const int n = std::max(o.samples, 1);
    for (int i = 0; i < n; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / n;
      // support function max Re(e^{-i theta} z) over the range set
      const double h = directional_derivative(frame, Matrix(std::polar(1.0, -theta) * b));
      csv << theta << "," << h << "," << fixed.real() << "," << fixed.imag() << "\n";
    }
    write_text(o.out_file, csv.str());
    out << "wrote " << n << " support samples to " << o.out_file << "\n";

    if (o.points_file) {
      Rng rng(o.seed);
      const std::vector<Complex> pts = sample_range_points(a, b, k, o.points, rng);
      std::ostringstream pcsv;
      pcsv.precision(17);
      pcsv << "re,im\n";
      for (Complex z : pts) pcsv << z.real() << "," << z.imag() << "\n";
      write_text(*o.points_file, pcsv.str());
      out << "wrote " << pts.size() << " range points to " << *o.points_file << "\n";
    }
    return 0;
  });
}

}  // namespace kyfan
