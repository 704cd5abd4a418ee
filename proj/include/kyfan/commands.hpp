#pragma once

// The CLI subcommands as library functions. Each returns the process exit
// code; stdout is human-oriented, the exit code is the machine contract.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "kyfan/decide.hpp"

namespace kyfan {

enum ExitCode : int {
  kExitPositive = 0,  // ORTHOGONAL, PARALLEL, or verification PASS
  kExitNegative = 1,  // NOT_ORTHOGONAL, NOT_PARALLEL, or verification FAIL
  kExitParse = 2,
  kExitBoundary = 3,
  kExitDegenerate = 4,
};

int exit_code_for(Verdict v);

int cmd_norm(const std::string& file, std::optional<int> k, std::ostream& out, std::ostream& err);

struct CheckOptions {
  std::string file;
  std::string mode = "pair";  // pair | blocks | subspace | parallel
  std::optional<std::string> json_out;
  std::optional<ScalarField> field;
  std::optional<int> k;
  std::optional<double> tol_decide;
  std::optional<double> tol_strict;
  std::optional<double> cluster_tol;
  std::optional<std::uint64_t> seed;
};

int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err);

int cmd_verify(const std::string& report_file, const std::string& problem_file, std::ostream& out,
               std::ostream& err);

struct GenOptions {
  int n = 4;
  int k = 2;
  std::string kind = "orthogonal";
  std::uint64_t seed = 0;
  int dim = 3;  // subspace dimension for kind=subspace
  std::optional<std::string> out_file;
};

int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err);

struct SweepOptions {
  std::string file;
  std::optional<int> k;
  std::string out_file;
  int samples = 360;
  std::optional<std::string> points_file;
  int points = 500;
  std::uint64_t seed = 0;
};

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

}  // namespace kyfan
