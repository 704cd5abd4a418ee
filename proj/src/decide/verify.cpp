#include <algorithm>
#include <cmath>

#include "internal.hpp"
#include "kyfan/norms.hpp"

namespace kyfan {

namespace {

struct Checker {
  VerificationReport report;

  void clause(std::string name, double residual, double tolerance) {
    const bool pass = std::isfinite(residual) && residual <= tolerance;
    report.clauses.push_back({std::move(name), residual, tolerance, pass});
    report.pass = report.pass && pass;
  }
  void fail(std::string name) { clause(std::move(name), INFINITY, 0.0); }
};

// Largest violation of "polar is unitary with polar^* A Hermitian PSD".
double polar_defect(const Matrix& polar, const Matrix& a) {
  if (polar.rows() != a.rows() || polar.cols() != a.cols()) return INFINITY;
  const Matrix abs_a = polar.adjoint() * a;
  const double asym = max_abs(abs_a - abs_a.adjoint());
  const double min_eig = hermitian_eig(herm(abs_a)).values.minCoeff();
  return std::max({unitarity_defect(polar), asym, -min_eig});
}

double largest_singular(const Matrix& m) { return singular_values(m)(0); }

void verify(const WitnessSystem& w, const Matrix& a, std::span<const Matrix> others, int k,
            double tol, Checker& c) {
  if (others.size() != 1 || w.vectors.rows() != a.rows() || w.vectors.cols() != k) return c.fail("shape");
  const Matrix& b = others[0];
  const RealVector s = singular_values(a);
  const double s1 = s(0);
  c.clause("polar-factor", polar_defect(w.polar, a), tol * (1.0 + s1));
  c.clause("orthonormal", unitarity_defect(w.vectors), tol);
  const Matrix abs_a = herm(w.polar.adjoint() * a);
  double eig = 0.0;
  for (int i = 0; i < k; ++i)
    eig = std::max(eig, (abs_a * w.vectors.col(i) - s(i) * w.vectors.col(i)).norm());
  c.clause("eigenvectors", eig, tol * (1.0 + s1));
  const Complex sum = (w.vectors.adjoint() * w.polar.adjoint() * b * w.vectors).trace();
  const double trace_res = w.real_field ? std::abs(sum.real()) : std::abs(sum);
  c.clause(w.real_field ? "real-trace" : "trace", trace_res, tol * (1.0 + ky_fan_norm(b, k)));
}

void verify(const WitnessT& w, const Matrix& a, std::span<const Matrix> others, int k, double tol,
            Checker& c) {
  const int n = static_cast<int>(a.rows());
  const int q = w.q, r = w.r;
  const bool frame_ok = w.u.rows() == n && w.u.cols() == n && w.v.rows() == n && w.v.cols() == n;
  const int t_rows = w.general ? n - k + q : r + q;
  if (others.size() != 1 || !frame_ok || q < 1 || q > k || r < 0 || k + r > n ||
      w.t.rows() != t_rows || w.t.cols() != r + q)
    return c.fail("shape");
  const Matrix& b = others[0];
  const RealVector s = singular_values(a);
  const double s1 = s(0);
  c.clause("frame-unitary", std::max(unitarity_defect(w.u), unitarity_defect(w.v)), tol);
  Matrix diag = Matrix::Zero(n, n);
  diag.diagonal() = s.cast<Complex>();
  c.clause("svd", max_abs(w.u.adjoint() * a * w.v - diag), tol * (1.0 + s1));
  const double spread = s(k - q) - s(k + r - 1);
  c.clause("cluster", w.general ? s(k - q) : spread, tol * (1.0 + s1));

  const Matrix& t = w.t;
  double feas = 0.0;
  if (w.general) {
    const RealVector st = singular_values(t);
    feas = std::max(st(0) - 1.0, st.sum() - q);
  } else {
    const EigenFrame eig = hermitian_eig(herm(t));
    feas = std::max({max_abs(t - t.adjoint()), -eig.values.minCoeff(), eig.values.maxCoeff() - 1.0,
                     std::abs(t.trace().real() - q)});
  }
  c.clause("T-feasible", feas, tol);

  const Matrix rotated = w.u.adjoint() * b * w.v;
  const Complex b11 = rotated.topLeftCorner(k - q, k - q).trace();
  const Matrix m = rotated.block(k - q, k - q, t_rows, r + q);
  c.clause("trace", std::abs(b11 + (t.adjoint() * m).trace()), tol * (1.0 + ky_fan_norm(b, k)));
}

void verify(const WitnessG& w, const Matrix& a, std::span<const Matrix> others, int k, double tol,
            Checker& c) {
  if (others.size() != 1 || w.g.rows() != a.rows() || w.g.cols() != a.cols()) return c.fail("shape");
  const Matrix& b = others[0];
  const RealVector sg = singular_values(w.g);
  const double norm_a = ky_fan_norm(a, k);
  c.clause("spectral-norm", sg(0) - 1.0, tol);
  c.clause("trace-norm", sg.sum() - k, tol * k);
  c.clause("norming", std::abs((w.g.adjoint() * a).trace() - norm_a), tol * (1.0 + norm_a));
  c.clause("annihilates-B", std::abs((w.g.adjoint() * b).trace()), tol * (1.0 + ky_fan_norm(b, k)));
}

void verify(const WitnessDensity& w, const Matrix& a, std::span<const Matrix> others, int k,
            double tol, Checker& c) {
  if (static_cast<int>(w.densities.size()) != k) return c.fail("count");
  for (const Matrix& p : w.densities)
    if (p.rows() != a.rows() || p.cols() != a.cols()) return c.fail("shape");
  const RealVector s = singular_values(a);
  const double s1 = s(0);
  c.clause("polar-factor", polar_defect(w.polar, a), tol * (1.0 + s1));
  const Matrix abs_a = herm(w.polar.adjoint() * a);

  double density = 0.0, eigen = 0.0;
  Matrix total = Matrix::Zero(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) {
    const Matrix& p = w.densities[i];
    density = std::max({density, max_abs(p - p.adjoint()), std::abs(p.trace() - 1.0),
                        -hermitian_eig(herm(p)).values.minCoeff()});
    eigen = std::max(eigen, max_abs(abs_a * p - s(i) * p));
    total += p;
  }
  c.clause("density", density, tol);
  c.clause("eigenspace", eigen, tol * (1.0 + s1));
  c.clause("norm-bound", largest_singular(total) - 1.0, tol);
  double orth = 0.0;
  const Matrix up = w.polar * total;
  for (const Matrix& bj : others) {
    if (bj.rows() != a.rows() || bj.cols() != a.cols()) return c.fail("shape");
    orth = std::max(orth, std::abs((bj.adjoint() * up).trace()) / std::max(1.0, bj.norm()));
  }
  c.clause("orthogonal-to-subspace", orth, tol);
}

void verify(const Violation& v, const Matrix& a, std::span<const Matrix> others, int k, double,
            Checker& c) {
  if (v.coefficients.size() != others.size()) return c.fail("shape");
  Matrix combo = a;
  double coeff_mass = 0.0;
  double norm_b = 0.0;
  for (std::size_t j = 0; j < others.size(); ++j) {
    if (others[j].rows() != a.rows() || others[j].cols() != a.cols()) return c.fail("shape");
    combo += v.coefficients[j] * others[j];
    coeff_mass += std::abs(v.coefficients[j]);
    norm_b = std::max(norm_b, ky_fan_norm(others[j], k));
  }
  const double norm_a = ky_fan_norm(a, k);
  const double value = ky_fan_norm(combo, k);
  const double slack = detail::violation_slack(norm_a, norm_b, coeff_mass);
  c.clause("claimed-norm", std::abs(value - v.norm_value), 4.0 * slack);
  // strict: value < ||A|| - slack, so the residual must be negative
  const double excess = value - (norm_a - slack);
  c.clause("strict-decrease", excess < 0 ? 0.0 : excess + slack, 0.0);
}

void verify(const ParallelWitness& w, const Matrix& a, std::span<const Matrix> others, int k,
            double tol, Checker& c) {
  if (others.size() != 1) return c.fail("shape");
  const Matrix& b = others[0];
  const double norm_a = ky_fan_norm(a, k);
  const double norm_b = ky_fan_norm(b, k);
  const double value = ky_fan_norm(a + w.lambda * b, k);
  const double scale = 1.0 + norm_a + norm_b;
  c.clause("unimodular", std::abs(std::abs(w.lambda) - 1.0), tol);
  c.clause("claimed-norm", std::abs(value - w.norm_value), tol * scale);
  c.clause("additive", norm_a + norm_b - value, tol * scale);
}

void shift(Matrix& m, double amount) { m.array() += Complex(amount, amount); }

}  // namespace

std::string_view kind_name(const Certificate& cert) {
  struct Visitor {
    std::string_view operator()(const WitnessSystem&) const { return "witness_system"; }
    std::string_view operator()(const WitnessT&) const { return "witness_T"; }
    std::string_view operator()(const WitnessG&) const { return "witness_G"; }
    std::string_view operator()(const WitnessDensity&) const { return "witness_density"; }
    std::string_view operator()(const Violation&) const { return "violation"; }
    std::string_view operator()(const ParallelWitness&) const { return "parallel_witness"; }
  };
  return std::visit(Visitor{}, cert);
}

std::string VerificationReport::first_failure() const {
  for (const ClauseResult& c : clauses)
    if (!c.pass) return c.name;
  return {};
}

VerificationReport verify_certificate(const Certificate& cert, const Matrix& a,
                                      std::span<const Matrix> others, int k, double tol) {
  Checker c;
  c.report.kind = std::string(kind_name(cert));
  const int n = static_cast<int>(a.rows());
  if (a.rows() != a.cols() || n == 0 || k < 1 || k > n || !a.allFinite()) {
    c.fail("input");
    return c.report;
  }
  std::visit([&](const auto& w) { verify(w, a, others, k, tol, c); }, cert);
  return c.report;
}

Certificate tamper(const Certificate& cert, double amount) {
  Certificate out = cert;
  struct Visitor {
    double amount;
    void operator()(WitnessSystem& w) const {
      shift(w.vectors, amount);
      shift(w.polar, amount);
    }
    void operator()(WitnessT& w) const {
      shift(w.t, amount);
      shift(w.u, amount);
      shift(w.v, amount);
    }
    void operator()(WitnessG& w) const { shift(w.g, amount); }
    void operator()(WitnessDensity& w) const {
      for (Matrix& p : w.densities) shift(p, amount);
      shift(w.polar, amount);
    }
    void operator()(Violation& w) const {
      for (Complex& c : w.coefficients) c += Complex(amount, amount);
      w.norm_value += amount;
    }
    void operator()(ParallelWitness& w) const {
      w.lambda += Complex(amount, amount);
      w.norm_value += amount;
    }
  };
  std::visit(Visitor{amount}, out);
  return out;
}

}  // namespace kyfan
