#pragma once

// Instances with a known answer, built backwards from the witnesses.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kyfan/io.hpp"

namespace kyfan {

enum class InstanceKind { kOrthogonal, kNonOrthogonal, kParallel, kSubspace };

std::optional<InstanceKind> parse_instance_kind(std::string_view name);
std::string_view to_string(InstanceKind kind);

struct Instance {
  Matrix a;
  Matrix b;                   // empty for subspace instances
  std::vector<Matrix> basis;  // subspace instances only
  int k = 1;
  std::string label;  // ORTHOGONAL, NOT_ORTHOGONAL or PARALLEL
};

/// Descending positive singular values; with `cluster`, s_k is repeated so
/// that its cluster has at least two members and reaches past index k when
/// possible.
RealVector random_spectrum(int n, int k, bool cluster, Rng& rng);

/// A = U V diag(s) V^* for Haar U, V; returns the factors when asked.
Matrix matrix_with_spectrum(const RealVector& s, Rng& rng, Matrix* polar = nullptr,
                            Matrix* right = nullptr);

Instance generate_instance(int n, int k, InstanceKind kind, Rng& rng, int subspace_dim = 3);

ProblemFile to_problem(const Instance& inst, std::uint64_t seed);

}  // namespace kyfan
