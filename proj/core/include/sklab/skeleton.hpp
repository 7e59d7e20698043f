#pragma once

#include <cstdint>
#include <string>

#include "sklab/linalg.hpp"
#include "sklab/matsource.hpp"
#include "sklab/rng.hpp"
#include "sklab/sampling.hpp"
#include "sklab/types.hpp"

namespace sklab {

enum class AlgorithmTag { uniform_k3, rrqr_mnk, rows_rrqr_nk2, colsvd, mixed_wrapper };

std::string to_string(AlgorithmTag tag);
AlgorithmTag algorithm_tag_from_string(const std::string& name);

/// A ~ A_{:C} Z A_{R:}. Row and column index lists may contain duplicates
/// (independent sampling keeps them); Z is |C| x |R|.
struct SkeletonDecomposition {
  IndexSample row_indices;
  IndexSample col_indices;
  Matrix core;
  Index source_rows = 0;
  Index source_cols = 0;
  double delta_used = 0.0;
  AlgorithmTag algorithm_tag = AlgorithmTag::uniform_k3;
  std::uint64_t seed = 0;
};

/// A ~ left * right for outputs that are not pure skeletons (the mixing
/// wrapper and the column-SVD variant).
struct LowRankFactorization {
  Matrix left;   // m x r
  Matrix right;  // r x n
};

/// Uniform sampling algorithm: draw l columns and l rows, extract A_RC
/// (the only entries of A that are read -- exactly l^2), and invert it with
/// threshold delta. ||Z|| <= 1/delta by construction.
SkeletonDecomposition skeleton_uniform_k3(const MatrixSource& A, Index l, double delta,
                                          Rng& rng);

/// delta heuristic lambda * sigma_{k+1}(A_RC) with lambda = sqrt(m n)/l:
/// under incoherent sampling the sampled block's singular values shrink by
/// about 1/lambda, so this estimates sigma_{k+1}(A). May return 0 (exactly
/// rank-deficient block); callers must floor it before use.
double heuristic_delta(const Matrix& A_RC, Index m, Index n, Index l, Index k);

/// Oversample l rows/columns, trim to exactly k of each with column-pivoted
/// QR, then solve for the core against the full matrix:
/// Z = A_{:C'}^+ (A A_{R':}^+).
SkeletonDecomposition skeleton_rrqr_mnk(const MatrixSource& A, Index l, Index k, Rng& rng);

/// Row-sample only: draw l rows, pick k columns by pivoted QR on A_{R:},
/// core Z = A_{RC'}^+. Reads exactly l*n entries of A.
SkeletonDecomposition skeleton_rows_rrqr_nk2(const MatrixSource& A, Index l, Index k,
                                             Rng& rng);

/// Column-SVD variant: SVD of A_{:C} split at delta (components below delta
/// discarded), output U_1 U_{1,R:}^+ A_{R:}.
LowRankFactorization skeleton_colsvd(const MatrixSource& A, Index l, double delta,
                                     Rng& rng);

/// U = F D X with D a random +-1 diagonal: flattens the row mass of any
/// column-orthonormal X so that U is O(log n)-coherent with high
/// probability; U stays column-orthonormal.
Matrix dft_sign_mix(const Matrix& X, Rng& rng);

/// Incoherence-fixing wrapper: factorizes B = F D2 A D1 F^T (never formed
/// densely; one blocked sweep of A computes everything needed) with the
/// uniform sampling algorithm and maps the result back to
/// A ~ (A D1 F_{C:}^T) Z (F_{R:} D2 A). Square A only. Not sublinear: the
/// sweep reads all n^2 entries once (or 2l matvecs when A has a fast one).
LowRankFactorization skeleton_mixed_wrapper(const MatrixSource& A, Index l, double delta,
                                            Rng& rng);

/// Materialized approximation, for error measurement at desk scale.
Matrix reconstruct_dense(const SkeletonDecomposition& s, const MatrixSource& A,
                         Index max_entries = 100000000);
Matrix reconstruct_dense(const LowRankFactorization& f, Index max_entries = 100000000);

/// approx * v without materializing: A_{:C} (Z (A_{R:} v)),
/// O((m+n) l + l^2) work.
Vector apply_to_vector(const SkeletonDecomposition& s, const MatrixSource& A,
                       const Vector& v);
Vector apply_to_vector(const LowRankFactorization& f, const Vector& v);

/// ||A - approx||_2 by blocked power iteration on the difference map; the
/// skeleton's sampled rows/columns are extracted once and cached, A itself
/// is touched only through matvecs.
double approximation_error_2norm(const MatrixSource& A, const SkeletonDecomposition& s,
                                 double tol = 1e-4, int max_iters = 300,
                                 std::uint64_t seed = 0x5eed);
double approximation_error_2norm(const MatrixSource& A, const LowRankFactorization& f,
                                 double tol = 1e-4, int max_iters = 300,
                                 std::uint64_t seed = 0x5eed);

}  // namespace sklab
