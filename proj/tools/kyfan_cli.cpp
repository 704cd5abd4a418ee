#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "kyfan/commands.hpp"

int main(int argc, char** argv) {
  using namespace kyfan;
  CLI::App app{"Birkhoff-James orthogonality and norm parallelism in the Ky Fan k-norms"};
  app.require_subcommand(1);

  std::string file;
  std::optional<int> k;

  auto* norm = app.add_subcommand("norm", "print ||A||_(k) and the singular values of A");
  norm->add_option("file", file, "problem file")->required();
  norm->add_option("--k", k, "Ky Fan index (default: the file's k)");

  CheckOptions check;
  std::string field;
  auto* chk = app.add_subcommand("check", "decide orthogonality or parallelism");
  chk->add_option("file", check.file, "problem file")->required();
  chk->add_option("--mode", check.mode, "pair | blocks | subspace | parallel")
      ->check(CLI::IsMember({"pair", "blocks", "subspace", "parallel"}));
  chk->add_option("--json", check.json_out, "write a JSON report here");
  chk->add_option("--field", field, "real | complex scalars")->check(CLI::IsMember({"real", "complex"}));
  chk->add_option("--k", check.k, "Ky Fan index");
  chk->add_option("--tol-decide", check.tol_decide, "acceptance tolerance, relative");
  chk->add_option("--tol-strict", check.tol_strict, "rejection tolerance, relative");
  chk->add_option("--cluster-tol", check.cluster_tol, "singular value clustering tolerance");
  chk->add_option("--seed", check.seed, "seed for randomized witness searches");

  std::string report, problem;
  auto* ver = app.add_subcommand("verify", "re-check the certificates in a report");
  ver->add_option("report", report, "report JSON from check --json")->required();
  ver->add_option("problem", problem, "problem file the report was made from")->required();

  GenOptions gen;
  auto* gn = app.add_subcommand("gen", "generate an instance with a known answer");
  gn->add_option("--n", gen.n, "matrix size")->check(CLI::Range(2, 1000));
  gn->add_option("--k", gen.k, "Ky Fan index");
  gn->add_option("--kind", gen.kind, "orthogonal | nonorthogonal | parallel | subspace")
      ->check(CLI::IsMember({"orthogonal", "nonorthogonal", "parallel", "subspace"}));
  gn->add_option("--seed", gen.seed, "random seed");
  gn->add_option("--dim", gen.dim, "subspace dimension for kind=subspace");
  gn->add_option("--out", gen.out_file, "output file (default stdout)");

  SweepOptions sweep;
  auto* sw = app.add_subcommand("sweep", "sample the support function of the range set as CSV");
  sw->add_option("file", sweep.file, "problem file")->required();
  sw->add_option("--k", sweep.k, "Ky Fan index");
  sw->add_option("--out", sweep.out_file, "CSV output")->required();
  sw->add_option("--samples", sweep.samples, "number of angles");
  sw->add_option("--points", sweep.points_file, "also write sampled range points to this CSV");
  sw->add_option("--n-points", sweep.points, "number of range points");
  sw->add_option("--seed", sweep.seed, "seed for range point sampling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  if (*norm) return cmd_norm(file, k, std::cout, std::cerr);
  if (*chk) {
    if (!field.empty()) check.field = field == "real" ? ScalarField::kReal : ScalarField::kComplex;
    return cmd_check(check, std::cout, std::cerr);
  }
  if (*ver) return cmd_verify(report, problem, std::cout, std::cerr);
  if (*gn) return cmd_gen(gen, std::cout, std::cerr);
  return cmd_sweep(sweep, std::cout, std::cerr);
}
