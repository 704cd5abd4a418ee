#pragma once

// JSON problem and report files. Matrices are stored as
// {"rows", "cols", "re": [...], "im": [...]} with row-major entries.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kyfan/decide.hpp"

namespace kyfan {

inline constexpr const char* kSchemaVersion = "1";

struct ProblemFile {
  std::string schema_version = kSchemaVersion;
  std::map<std::string, Matrix> matrices;
  int k = 1;
  ScalarField field = ScalarField::kComplex;
  std::vector<std::string> subspace;  // names of the spanning matrices
  std::optional<double> tol_decide;
  std::optional<double> tol_strict;
  std::optional<double> cluster_tol;
  std::string label;  // ground truth written by the generator
  std::optional<std::uint64_t> seed;

  /// Named matrix; throws Parse when it is missing.
  const Matrix& matrix(const std::string& name) const;
  std::vector<Matrix> subspace_basis() const;
  Tolerances tolerances() const;
};

ProblemFile parse_problem(const std::string& text);
std::string dump_problem(const ProblemFile& problem);

struct ReportFile {
  std::string mode;  // pair | blocks | subspace | parallel
  int k = 1;
  ScalarField field = ScalarField::kComplex;
  Decision decision;
  std::vector<VerificationReport> checks;  // one per certificate
  double elapsed_ms = 0.0;
  std::uint64_t seed = 0;
};

ReportFile parse_report(const std::string& text);
std::string dump_report(const ReportFile& report);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace kyfan
