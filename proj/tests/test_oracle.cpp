#include "doctest.h"
#include "kyfan/generate.hpp"
#include "kyfan/norms.hpp"
#include "kyfan/oracle.hpp"
#include "support.hpp"

using namespace kyfan;
using kyfan::test::diag;

TEST_CASE("grid_min_norm on small examples") {
  const LambdaMin same = grid_min_norm(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1);
  CHECK(std::abs(same.lambda + 1.0) < 1e-5);
  CHECK(same.value < 1e-5);

  // ||diag(1, 1/2) + lambda diag(0, 1)||_(1) = max(1, |1/2 + lambda|)
  const LambdaMin flat = grid_min_norm(diag({1, 0.5}), diag({0, 1}), 1);
  CHECK(flat.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("grid_min_norm value is attained and below random probes") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + trial % 3;
    const Matrix a = random_gaussian(3, 3, rng);
    const Matrix b = random_gaussian(3, 3, rng);
    const LambdaMin m = grid_min_norm(a, b, k);
    CHECK(std::abs(ky_fan_norm(a + m.lambda * b, k) - m.value) <= 1e-12 * (1 + m.value));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < 50; ++s) {
      const Complex lambda = m.lambda + 0.1 * Complex(gauss(rng), gauss(rng));
      CHECK(ky_fan_norm(a + lambda * b, k) >= m.value - 1e-9);
    }
  }
}

TEST_CASE("lambda -> ||A + lambda B|| is midpoint convex") {
  Rng rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 4;
    const Matrix a = random_gaussian(4, 4, rng);
    const Matrix b = random_gaussian(4, 4, rng);
    const Complex x(gauss(rng), gauss(rng));
    const Complex y(gauss(rng), gauss(rng));
    const double mid = ky_fan_norm(a + 0.5 * (x + y) * b, k);
    CHECK(mid <= 0.5 * (ky_fan_norm(a + x * b, k) + ky_fan_norm(a + y * b, k)) + 1e-9);
  }
}

TEST_CASE("oracle_check_pair on known instances") {
  CHECK(oracle_check_pair(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1) == OracleVerdict::kNotOrthogonal);
  CHECK(oracle_check_pair(diag({1, 0.5}), diag({0, 1}), 1) != OracleVerdict::kNotOrthogonal);
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Instance inst = generate_instance(3, 1 + trial % 3, InstanceKind::kNonOrthogonal, rng);
    CHECK(oracle_check_pair(inst.a, inst.b, inst.k) == OracleVerdict::kNotOrthogonal);
  }
}

TEST_CASE("fd_directional on diagonal examples") {
  CHECK(fd_directional(diag({2, 1}), diag({1, 0}), 1, 1e-6) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(fd_directional(diag({2, 1}), diag({0, 1}), 1, 1e-6)) < 1e-9);
  // trace norm at a rank-one point, perpendicular direction: |t| growth
  CHECK(fd_directional(diag({1, 0}), diag({0, 1}), 2, 1e-6) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sample_range_points") {
  Rng rng(11);
  {
    // distinct top-k singular values pin the system: one point, tr(U^*B) restricted
    const Matrix a = diag({3, 2, 1});
    const Matrix b = diag({0.5, -1, 7});
    for (const Complex z : sample_range_points(a, b, 2, 20, rng)) CHECK(std::abs(z - Complex(-0.5)) < 1e-12);
  }
  {
    // A = I, k = 1: <u, B u> over unit vectors, here the interval [-1, 1]
    const std::vector<Complex> pts = sample_range_points(Matrix::Identity(2, 2), diag({1, -1}), 1, 500, rng);
    double lo = 1, hi = -1;
    for (const Complex z : pts) {
      CHECK(std::abs(z.imag()) < 1e-12);
      CHECK(std::abs(z.real()) <= 1 + 1e-12);
      lo = std::min(lo, z.real());
      hi = std::max(hi, z.real());
    }
    CHECK(lo < -0.8);
    CHECK(hi > 0.8);
  }
  try {
    sample_range_points(diag({1, 0}), diag({0, 1}), 2, 5, rng);
    FAIL("expected DegenerateRank");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateRank);
  }
}

TEST_CASE("oracle_check_subspace") {
  Rng rng(13);
  const Matrix a = diag({2, 1, 0.5});
  CHECK(oracle_check_subspace(a, {}, 2, 4, rng) == OracleVerdict::kNoCounterexample);
  std::vector<Matrix> all;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) all.push_back(test::unit_outer(3, i, j));
  CHECK(oracle_check_subspace(a, all, 2, 4, rng) == OracleVerdict::kNotOrthogonal);
  const Matrix off[] = {test::unit_outer(3, 0, 1)};
  CHECK(oracle_check_subspace(a, off, 1, 4, rng) == OracleVerdict::kNoCounterexample);
}

TEST_CASE("oracle_parallel_grid") {
  const Matrix a = diag({2, 1});
  const ParallelProbe same = oracle_parallel_grid(a, a, 1);
  CHECK(std::abs(same.lambda - 1.0) < 1e-6);
  CHECK(std::abs(same.margin) < 1e-9);
  const ParallelProbe flip = oracle_parallel_grid(a, Matrix(Complex(0, 1) * a), 2);
  CHECK(std::abs(flip.lambda - Complex(0, -1)) < 1e-6);
  CHECK(std::abs(flip.margin) < 1e-9);
  CHECK(oracle_parallel_grid(diag({1, 0.5}), diag({0, 1}), 1).margin == doctest::Approx(-0.5));
}
