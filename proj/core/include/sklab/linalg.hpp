#pragma once

#include <functional>
#include <vector>

#include "sklab/rng.hpp"
#include "sklab/types.hpp"

namespace sklab {

/// SVD factors with a threshold delta splitting kept and discarded
/// components. sigma holds every nonzero singular value, nonincreasing;
/// kept = #{i : sigma[i] >= delta}.
struct TruncatedSVD {
  Matrix U;          // m x r, column-orthonormal
  RealVector sigma;  // r, nonincreasing, all > 0
  Matrix V;          // n x r, column-orthonormal
  double delta = 0.0;
  Index kept = 0;

  Index rank() const { return sigma.size(); }
};

/// k columns picked by rank-revealing QR, with the measured projection
/// residual and the f(k,l) = sqrt(1 + 2k(l-k)) factor the selection is
/// expected to meet relative to sigma_{k+1}.
struct ColumnSelection {
  std::vector<Index> indices;
  double residual_norm = 0.0;
  double bound_factor = 0.0;
};

struct SpectralNormResult {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;

  operator double() const { return value; }
};

/// A matrix seen as a pair of matvec callbacks; used where forming the
/// operand densely is the thing we are trying to avoid.
struct LinearMap {
  Index rows = 0;
  Index cols = 0;
  std::function<Vector(const Vector&)> apply;          // rows <- cols
  std::function<Vector(const Vector&)> apply_adjoint;  // cols <- rows

  static LinearMap from_dense(const Matrix& M);
};

/// Full SVD of a dense matrix; throws on non-finite entries.
/// delta of the returned TruncatedSVD is 0 (nothing discarded).
TruncatedSVD svd(const Matrix& M);

/// Regularized pseudoinverse: invert singular values >= delta, drop the
/// rest. The result Z satisfies ||Z|| <= 1/delta and equals (M + E)^+ for a
/// perturbation E with ||E|| <= delta.
Matrix pinv_threshold(const Matrix& M, double delta);

/// Moore-Penrose pseudoinverse with the usual machine-precision cutoff
/// max(m, n) * eps * sigma_1.
Matrix pinv(const Matrix& M);

/// Select k columns by column-pivoted Householder QR (greedy residual-norm
/// pivoting) and report the spectral norm of M minus its projection onto the
/// span of the selected columns.
ColumnSelection rrqr_select(const Matrix& M, Index k);

/// Largest singular value via blocked power iteration on the normal map.
/// Deterministic for a fixed seed. If the iteration cap is hit the best
/// estimate is returned with converged = false.
SpectralNormResult spectral_norm(const LinearMap& map, double tol = 1e-10,
                                 int max_iters = 500, int block = 4,
                                 std::uint64_t seed = 0x5eed);

SpectralNormResult spectral_norm(const Matrix& M, double tol = 1e-10,
                                 int max_iters = 500, int block = 4,
                                 std::uint64_t seed = 0x5eed);

/// Selected rows of the n-point unitary DFT matrix
/// F[j,l] = n^{-1/2} exp(-2 pi i j l / n).
Matrix dft_matrix_rows(Index n, const std::vector<Index>& rows);

/// The full n-point unitary DFT matrix.
Matrix dft_matrix(Index n);

/// n independent signs, each +1 or -1 with probability 1/2.
RealVector random_sign_diagonal(Index n, Rng& rng);

/// Haar-distributed n x n unitary (QR of a complex Gaussian with the phase
/// convention fixed).
Matrix haar_unitary(Index n, Rng& rng);

}  // namespace sklab
