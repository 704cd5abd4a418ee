#pragma once

// Dense complex linear algebra used by the rest of the library: Hermitian
// eigendecomposition, SVD with polar factor, singular-value clustering, and
// Fan-type partial trace maxima.

#include <complex>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kyfan/error.hpp"

namespace kyfan {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Singular values at or below kRankTol * s_1 are treated as zero.
inline constexpr double kRankTol = 1e-12;

/// Eigenpairs of a Hermitian matrix, values descending.
struct EigenFrame {
  RealVector values;
  Matrix vectors;
};

/// A = U diag(S) V^*, with polar factor polarU = U V^* and absA = V diag(S) V^*.
struct SvdFrame {
  Matrix U;
  RealVector S;
  Matrix V;
  Matrix polarU;
  Matrix absA;

  int size() const { return static_cast<int>(S.size()); }
  double largest() const { return S.size() > 0 ? S(0) : 0.0; }
};

/// A run of numerically equal values; indices are 0-based, [begin, end).
struct Cluster {
  double value = 0.0;
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool contains(int index) const { return index >= begin && index < end; }
};

/// Multiplicity split around index k (1-based): the cluster holding s_k
/// covers indices k-q+1 .. k+r.
struct SpectralPartition {
  int k = 1;
  std::vector<Cluster> clusters;
  int boundary = 0;  // position of the cluster holding s_k in `clusters`
  int q = 1;
  int r = 0;
  double cluster_tol = 0.0;

  const Cluster& boundary_cluster() const { return clusters[boundary]; }
  int fixed_count() const { return k - q; }
  int boundary_dim() const { return q + r; }
  int tail_count(int n) const { return n - k - r; }
  /// Index of the cluster containing the 0-based position i.
  int cluster_of(int i) const;
};

void require_finite(const Matrix& m, const char* what);
void require_square(const Matrix& m, const char* what);

/// (M + M^*) / 2.
Matrix herm(const Matrix& m);

EigenFrame hermitian_eig(const Matrix& h);
SvdFrame svd(const Matrix& a);
RealVector singular_values(const Matrix& m);

double default_cluster_tol(const RealVector& descending);
SpectralPartition cluster_spectrum(const RealVector& descending, int k, double cluster_tol);

struct FanMaximum {
  double value = 0.0;
  Matrix maximizer;
};

/// max { tr(T H) : 0 <= T <= I, tr T = q }, attained at the top-q eigenprojector.
FanMaximum top_q_eigsum(const Matrix& h, int q);

/// Sum of the q largest singular values of a rectangular matrix.
double top_q_singsum(const Matrix& m, int q);

/// max { Re tr(T^* M) : s_1(T) <= 1, sum s_j(T) <= q } with its maximizer
/// T = sum_{i<q} x_i y_i^* built from the top singular pairs of M.
FanMaximum top_q_singframe(const Matrix& m, int q);

/// Rotate each column so its first non-negligible entry is real positive.
void normalize_column_phases(Matrix& columns);

Matrix random_gaussian(int rows, int cols, Rng& rng);
/// Haar-distributed unitary.
Matrix random_unitary(int n, Rng& rng);
/// Extend orthonormal columns to a full unitary by Gram-Schmidt against the
/// standard basis.
Matrix complete_to_unitary(const Matrix& columns);
/// Orthonormalize a list of matrices under the Frobenius inner product,
/// dropping (numerically) dependent members.
std::vector<Matrix> orthonormalize(std::span<const Matrix> basis, double tol = 1e-10);

double max_abs(const Matrix& m);
/// ||Q^* Q - I||_max.
double unitarity_defect(const Matrix& q);

}  // namespace kyfan
