#include "kyfan/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kyfan {

using json = nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::kParse, what); }

json to_json(const Matrix& m) {
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Matrix matrix_from(const json& j, const std::string& name) {
  if (!j.is_object()) parse_fail("matrix '" + name + "' is not an object");
  const auto rows = j.at("rows").get<long long>();
  const auto cols = j.at("cols").get<long long>();
  if (rows < 0 || cols < 0) parse_fail("matrix '" + name + "' has a negative dimension");
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>()
                                   : std::vector<double>(re.size(), 0.0);
  const auto count = static_cast<std::size_t>(rows * cols);
  if (re.size() != count || im.size() != count)
    parse_fail("matrix '" + name + "': re/im lengths must equal rows*cols");
  Matrix m(rows, cols);
  for (long long i = 0; i < rows; ++i)
    for (long long c = 0; c < cols; ++c) {
      const auto idx = static_cast<std::size_t>(i * cols + c);
      m(i, c) = Complex(re[idx], im[idx]);
    }
  if (!m.allFinite()) parse_fail("matrix '" + name + "' has non-finite entries");
  return m;
}

json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }
Complex complex_from(const json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

// Non-finite residuals are written as null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
double number_from(const json& j) { return j.is_null() ? INFINITY : j.get<double>(); }

ScalarField field_from(const std::string& s) {
  if (s == "real") return ScalarField::kReal;
  if (s == "complex") return ScalarField::kComplex;
  parse_fail("field must be \"real\" or \"complex\"");
}

Verdict verdict_from(const std::string& s) {
  for (Verdict v : {Verdict::kOrthogonal, Verdict::kNotOrthogonal, Verdict::kParallel,
                    Verdict::kNotParallel, Verdict::kBoundary})
    if (to_string(v) == s) return v;
  parse_fail("unknown verdict '" + s + "'");
}

json certificate_json(const Certificate& cert) {
  json out = std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, WitnessSystem>) {
          return {{"vectors", to_json(c.vectors)}, {"polar", to_json(c.polar)}, {"real_field", c.real_field}};
        } else if constexpr (std::is_same_v<T, WitnessT>) {
          return {{"t", to_json(c.t)}, {"u", to_json(c.u)}, {"v", to_json(c.v)},
                  {"q", c.q},          {"r", c.r},          {"general", c.general}};
        } else if constexpr (std::is_same_v<T, WitnessG>) {
          return {{"g", to_json(c.g)}};
        } else if constexpr (std::is_same_v<T, WitnessDensity>) {
          json ps = json::array();
          for (const Matrix& p : c.densities) ps.push_back(to_json(p));
          return {{"densities", ps}, {"polar", to_json(c.polar)}};
        } else if constexpr (std::is_same_v<T, Violation>) {
          json cs = json::array();
          for (Complex z : c.coefficients) cs.push_back(to_json(z));
          return {{"coefficients", cs}, {"norm_value", c.norm_value}};
        } else {
          return {{"lambda", to_json(c.lambda)}, {"norm_value", c.norm_value}};
        }
      },
      cert);
  out["kind"] = kind_name(cert);
  return out;
}

Certificate certificate_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "witness_system")
    return WitnessSystem{matrix_from(j.at("vectors"), "vectors"), matrix_from(j.at("polar"), "polar"),
                         j.value("real_field", false)};
  if (kind == "witness_T")
    return WitnessT{matrix_from(j.at("t"), "t"),  matrix_from(j.at("u"), "u"),
                    matrix_from(j.at("v"), "v"),  j.at("q").get<int>(),
                    j.at("r").get<int>(),         j.at("general").get<bool>()};
  if (kind == "witness_G") return WitnessG{matrix_from(j.at("g"), "g")};
  if (kind == "witness_density") {
    WitnessDensity w;
    for (const json& p : j.at("densities")) w.densities.push_back(matrix_from(p, "density"));
    w.polar = matrix_from(j.at("polar"), "polar");
    return w;
  }
  if (kind == "violation") {
    Violation v;
    for (const json& c : j.at("coefficients")) v.coefficients.push_back(complex_from(c));
    v.norm_value = j.at("norm_value").get<double>();
    return v;
  }
  if (kind == "parallel_witness")
    return ParallelWitness{complex_from(j.at("lambda")), j.at("norm_value").get<double>()};
  parse_fail("unknown certificate kind '" + kind + "'");
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
}

}  // namespace

const Matrix& ProblemFile::matrix(const std::string& name) const {
  const auto it = matrices.find(name);
  if (it == matrices.end()) parse_fail("problem has no matrix named '" + name + "'");
  return it->second;
}

std::vector<Matrix> ProblemFile::subspace_basis() const {
  std::vector<Matrix> out;
  for (const std::string& name : subspace) out.push_back(matrix(name));
  return out;
}

Tolerances ProblemFile::tolerances() const {
  Tolerances t;
  if (tol_decide) t.decide = *tol_decide;
  if (tol_strict) t.strict = *tol_strict;
  t.cluster = cluster_tol;
  return t;
}

ProblemFile parse_problem(const std::string& text) {
  return guarded([&] {
    const json j = json::parse(text);
    ProblemFile p;
    p.schema_version = j.at("schema_version").get<std::string>();
    if (p.schema_version != kSchemaVersion) parse_fail("unsupported schema_version " + p.schema_version);
    for (const auto& [name, m] : j.at("matrices").items()) p.matrices.emplace(name, matrix_from(m, name));
    p.k = j.at("k").get<int>();
    p.field = field_from(j.value("field", std::string("complex")));
    if (j.contains("subspace")) p.subspace = j.at("subspace").get<std::vector<std::string>>();
    for (const std::string& name : p.subspace) p.matrix(name);
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      if (t.contains("tol_decide")) p.tol_decide = t.at("tol_decide").get<double>();
      if (t.contains("tol_strict")) p.tol_strict = t.at("tol_strict").get<double>();
      if (t.contains("cluster_tol")) p.cluster_tol = t.at("cluster_tol").get<double>();
    }
    p.label = j.value("label", std::string());
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
    return p;
  });
}

std::string dump_problem(const ProblemFile& p) {
  json j;
  j["schema_version"] = p.schema_version;
  json ms = json::object();
  for (const auto& [name, m] : p.matrices) ms[name] = to_json(m);
  j["matrices"] = ms;
  j["k"] = p.k;
  j["field"] = to_string(p.field);
  if (!p.subspace.empty()) j["subspace"] = p.subspace;
  json tol = json::object();
  if (p.tol_decide) tol["tol_decide"] = *p.tol_decide;
  if (p.tol_strict) tol["tol_strict"] = *p.tol_strict;
  if (p.cluster_tol) tol["cluster_tol"] = *p.cluster_tol;
  if (!tol.empty()) j["tolerances"] = tol;
  if (!p.label.empty()) j["label"] = p.label;
  if (p.seed) j["seed"] = *p.seed;
  return j.dump(2) + "\n";
}

ReportFile parse_report(const std::string& text) {
  return guarded([&] {
    const json j = json::parse(text);
    if (j.at("schema_version").get<std::string>() != kSchemaVersion)
      parse_fail("unsupported report schema_version");
    ReportFile r;
    r.mode = j.at("mode").get<std::string>();
    r.k = j.at("k").get<int>();
    r.field = field_from(j.value("field", std::string("complex")));
    Decision& d = r.decision;
    d.verdict = verdict_from(j.at("verdict").get<std::string>());
    d.margin = number_from(j.at("margin"));
    d.margin_lower = number_from(j.at("margin_lower"));
    d.scale = j.at("scale").get<double>();
    d.method = j.at("method").get<std::string>();
    const json& t = j.at("tolerances");
    d.tolerances.decide = t.at("tol_decide").get<double>();
    d.tolerances.strict = t.at("tol_strict").get<double>();
    d.tolerances.cert = t.at("tol_cert").get<double>();
    d.cluster_tol = t.at("cluster_tol").get<double>();
    d.degenerate_rank = j.value("degenerate_rank", false);
    for (const json& c : j.at("certificates")) d.certificates.push_back(certificate_from(c));
    d.notes = j.value("notes", std::vector<std::string>{});
    d.evaluations = j.value("evaluations", 0);
    r.elapsed_ms = j.at("timings").at("elapsed_ms").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  });
}

std::string dump_report(const ReportFile& r) {
  const Decision& d = r.decision;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["mode"] = r.mode;
  j["k"] = r.k;
  j["field"] = to_string(r.field);
  j["verdict"] = to_string(d.verdict);
  j["margin"] = number(d.margin);
  j["margin_lower"] = number(d.margin_lower);
  j["scale"] = d.scale;
  j["method"] = d.method;
  j["tolerances"] = {{"tol_decide", d.tolerances.decide},
                     {"tol_strict", d.tolerances.strict},
                     {"tol_cert", d.tolerances.cert},
                     {"cluster_tol", d.cluster_tol}};
  j["degenerate_rank"] = d.degenerate_rank;
  json certs = json::array();
  for (std::size_t i = 0; i < d.certificates.size(); ++i) {
    json c = certificate_json(d.certificates[i]);
    if (i < r.checks.size()) {
      json clauses = json::array();
      for (const ClauseResult& cl : r.checks[i].clauses)
        clauses.push_back({{"clause", cl.name},
                           {"residual", number(cl.residual)},
                           {"tolerance", cl.tolerance},
                           {"pass", cl.pass}});
      c["residuals"] = clauses;
    }
    certs.push_back(c);
  }
  j["certificates"] = certs;
  j["notes"] = d.notes;
  j["evaluations"] = d.evaluations;
  j["timings"] = {{"elapsed_ms", r.elapsed_ms}};
  j["seed"] = r.seed;
  return j.dump(2) + "\n";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParse, "cannot write " + path);
  out << text;
}

}  // namespace kyfan
