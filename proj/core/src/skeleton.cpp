#include "sklab/skeleton.hpp"

#include <cmath>
#include <stdexcept>

namespace sklab {

std::string to_string(AlgorithmTag tag) {
  switch (tag) {
    case AlgorithmTag::uniform_k3: return "uniform_k3";
    case AlgorithmTag::rrqr_mnk: return "rrqr_mnk";
    case AlgorithmTag::rows_rrqr_nk2: return "rows_rrqr_nk2";
    case AlgorithmTag::colsvd: return "colsvd";
    case AlgorithmTag::mixed_wrapper: return "mixed_wrapper";
  }
  throw std::logic_error("to_string: unknown AlgorithmTag");
}

AlgorithmTag algorithm_tag_from_string(const std::string& name) {
  if (name == "uniform_k3") return AlgorithmTag::uniform_k3;
  if (name == "rrqr_mnk") return AlgorithmTag::rrqr_mnk;
  if (name == "rows_rrqr_nk2") return AlgorithmTag::rows_rrqr_nk2;
  if (name == "colsvd") return AlgorithmTag::colsvd;
  if (name == "mixed_wrapper") return AlgorithmTag::mixed_wrapper;
  throw std::invalid_argument("unknown algorithm tag: " + name);
}

namespace {

std::vector<Index> all_indices(Index n) {
  std::vector<Index> ids(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
  return ids;
}

Matrix select_columns(const Matrix& M, const std::vector<Index>& ids) {
  Matrix out(M.rows(), static_cast<Index>(ids.size()));
  for (std::size_t j = 0; j < ids.size(); ++j) out.col(static_cast<Index>(j)) = M.col(ids[j]);
  return out;
}

Matrix select_rows(const Matrix& M, const std::vector<Index>& ids) {
  Matrix out(static_cast<Index>(ids.size()), M.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) out.row(static_cast<Index>(i)) = M.row(ids[i]);
  return out;
}

std::vector<Index> remap(const IndexSample& sample, const std::vector<Index>& picks) {
  std::vector<Index> out;
  out.reserve(picks.size());
  for (Index p : picks) out.push_back(sample.indices[static_cast<std::size_t>(p)]);
  return out;
}

}  // namespace

SkeletonDecomposition skeleton_uniform_k3(const MatrixSource& A, Index l, double delta,
                                          Rng& rng) {
  const Index m = A.rows(), n = A.cols();
  if (!(delta > 0.0)) throw std::invalid_argument("skeleton_uniform_k3: delta must be > 0");
  if (l < 1 || l > std::min(m, n))
    throw std::invalid_argument("skeleton_uniform_k3: l out of range");

  SkeletonDecomposition s;
  s.seed = rng.seed();
  s.col_indices = sample_uniform(n, l, rng);  // columns first, then rows
  s.row_indices = sample_uniform(m, l, rng);
  const Matrix A_RC = A.submatrix(s.row_indices.indices, s.col_indices.indices);
  s.core = pinv_threshold(A_RC, delta);
  s.source_rows = m;
  s.source_cols = n;
  s.delta_used = delta;
  s.algorithm_tag = AlgorithmTag::uniform_k3;
  return s;
}

double heuristic_delta(const Matrix& A_RC, Index m, Index n, Index l, Index k) {
  if (k < 0 || k >= std::min(A_RC.rows(), A_RC.cols()))
    throw std::invalid_argument("heuristic_delta: need k < min dimension of A_RC");
  const double lambda = std::sqrt(static_cast<double>(m) * static_cast<double>(n)) /
                        static_cast<double>(l);
  const TruncatedSVD f = svd(A_RC);
  const double sigma_next = (k < f.sigma.size()) ? f.sigma(k) : 0.0;
  return lambda * sigma_next;
}

SkeletonDecomposition skeleton_rrqr_mnk(const MatrixSource& A, Index l, Index k, Rng& rng) {
  const Index m = A.rows(), n = A.cols();
  if (k < 1 || k > l) throw std::invalid_argument("skeleton_rrqr_mnk: need 1 <= k <= l");
  if (l > std::min(m, n)) throw std::invalid_argument("skeleton_rrqr_mnk: l out of range");

  SkeletonDecomposition s;
  s.seed = rng.seed();
  IndexSample cols = sample_uniform(n, l, rng);
  IndexSample rows = sample_uniform(m, l, rng);

  const Matrix A_C = A.submatrix(all_indices(m), cols.indices);
  const ColumnSelection col_pick = rrqr_select(A_C, k);
  const Matrix A_R = A.submatrix(rows.indices, all_indices(n));
  const ColumnSelection row_pick = rrqr_select(A_R.adjoint(), k);

  s.col_indices = IndexSample{remap(cols, col_pick.indices), n, true};
  s.row_indices = IndexSample{remap(rows, row_pick.indices), m, true};

  const Matrix A_Cp = select_columns(A_C, col_pick.indices);  // m x k
  const Matrix A_Rp = select_rows(A_R, row_pick.indices);     // k x n

  // Z = A_{:C'}^+ (A A_{R':}^+), the Frobenius-optimal core for these picks.
  const Matrix right_pinv = pinv(A_Rp);  // n x k
  Matrix AW(m, k);
  for (Index j = 0; j < k; ++j) AW.col(j) = A.matvec(right_pinv.col(j));
  s.core = pinv(A_Cp) * AW;

  s.source_rows = m;
  s.source_cols = n;
  s.delta_used = 0.0;
  s.algorithm_tag = AlgorithmTag::rrqr_mnk;
  return s;
}

SkeletonDecomposition skeleton_rows_rrqr_nk2(const MatrixSource& A, Index l, Index k,
                                             Rng& rng) {
  const Index m = A.rows(), n = A.cols();
  if (k < 1 || k > l) throw std::invalid_argument("skeleton_rows_rrqr_nk2: need 1 <= k <= l");
  if (l > m) throw std::invalid_argument("skeleton_rows_rrqr_nk2: l out of range");
  if (k > n) throw std::invalid_argument("skeleton_rows_rrqr_nk2: k out of range");

  SkeletonDecomposition s;
  s.seed = rng.seed();
  s.row_indices = sample_uniform(m, l, rng);

  const Matrix A_R = A.submatrix(s.row_indices.indices, all_indices(n));  // l x n
  const ColumnSelection pick = rrqr_select(A_R, k);
  s.col_indices = IndexSample{pick.indices, n, true};

  const Matrix A_RCp = select_columns(A_R, pick.indices);  // l x k
  s.core = pinv(A_RCp);                                    // k x l

  s.source_rows = m;
  s.source_cols = n;
  s.delta_used = 0.0;
  s.algorithm_tag = AlgorithmTag::rows_rrqr_nk2;
  return s;
}

LowRankFactorization skeleton_colsvd(const MatrixSource& A, Index l, double delta,
                                     Rng& rng) {
  const Index m = A.rows(), n = A.cols();
  if (!(delta > 0.0)) throw std::invalid_argument("skeleton_colsvd: delta must be > 0");
  if (l < 1 || l > std::min(m, n))
    throw std::invalid_argument("skeleton_colsvd: l out of range");

  IndexSample cols = sample_uniform(n, l, rng);
  IndexSample rows = sample_uniform(m, l, rng);

  const Matrix A_C = A.submatrix(all_indices(m), cols.indices);  // m x l
  const TruncatedSVD f = svd(A_C);
  Index r = 0;
  while (r < f.sigma.size() && f.sigma(r) >= delta) ++r;

  const Matrix U1 = f.U.leftCols(r);
  const Matrix U1R = select_rows(U1, rows.indices);  // l x r

  LowRankFactorization out;
  out.left = U1 * pinv(U1R);                               // m x l; zero when r = 0
  out.right = A.submatrix(rows.indices, all_indices(n));   // l x n
  return out;
}

Matrix dft_sign_mix(const Matrix& X, Rng& rng) {
  const Index n = X.rows(), k = X.cols();
  const Matrix gram = X.adjoint() * X - Matrix::Identity(k, k);
  if (gram.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("dft_sign_mix: X must be column-orthonormal");
  const RealVector d = random_sign_diagonal(n, rng);
  return dft_matrix(n) * (d.cast<Complex>().asDiagonal() * X);
}

LowRankFactorization skeleton_mixed_wrapper(const MatrixSource& A, Index l, double delta,
                                            Rng& rng) {
  const Index n = A.cols();
  if (A.rows() != n)
    throw std::invalid_argument("skeleton_mixed_wrapper: A must be square");
  if (!(delta > 0.0)) throw std::invalid_argument("skeleton_mixed_wrapper: delta must be > 0");
  if (l < 1 || l > n) throw std::invalid_argument("skeleton_mixed_wrapper: l out of range");

  const RealVector d1 = random_sign_diagonal(n, rng);
  const RealVector d2 = random_sign_diagonal(n, rng);
  IndexSample cols = sample_uniform(n, l, rng);
  IndexSample rows = sample_uniform(n, l, rng);

  // B = F D2 A D1 F^T (F is symmetric). The pieces needed are
  //   W = A D1 F_{C:}^T          (n x l)
  //   right = F_{R:} D2 A        (l x n)
  //   B_RC = F_{R:} D2 W         (l x l)
  const Matrix F_C = dft_matrix_rows(n, cols.indices);  // l x n
  const Matrix F_R = dft_matrix_rows(n, rows.indices);  // l x n
  const Matrix V = d1.cast<Complex>().asDiagonal() * F_C.transpose();  // n x l
  const Matrix M2 = F_R * d2.cast<Complex>().asDiagonal();             // l x n

  Matrix W(n, l);
  Matrix right(l, n);
  if (A.has_fast_matvec()) {
    for (Index j = 0; j < l; ++j) W.col(j) = A.matvec(V.col(j));
    for (Index i = 0; i < l; ++i)
      right.row(i) = A.matvec_adjoint(M2.row(i).adjoint()).adjoint();
  } else {
    // One blocked sweep over the columns of A fills both W and right.
    W.setZero();
    const Index block = 64;
    const std::vector<Index> all_rows = all_indices(n);
    for (Index j0 = 0; j0 < n; j0 += block) {
      const Index b = std::min(block, n - j0);
      std::vector<Index> cols_blk(static_cast<std::size_t>(b));
      for (Index t = 0; t < b; ++t) cols_blk[static_cast<std::size_t>(t)] = j0 + t;
      const Matrix A_blk = A.submatrix(all_rows, cols_blk);  // n x b
      W.noalias() += A_blk * V.middleRows(j0, b);
      right.middleCols(j0, b).noalias() = M2 * A_blk;
    }
  }

  const Matrix B_RC = M2 * W;  // equals F_R D2 (A D1 F_C^T) restricted correctly
  const Matrix Z = pinv_threshold(B_RC, delta);

  LowRankFactorization out;
  out.left = W * Z;  // (A D1 F_{C:}^T) Z
  out.right = std::move(right);
  return out;
}

Matrix reconstruct_dense(const SkeletonDecomposition& s, const MatrixSource& A,
                         Index max_entries) {
  const Index m = s.source_rows, n = s.source_cols;
  if (m * n > max_entries)
    throw std::length_error("reconstruct_dense: output exceeds the entry guard");
  if (s.core.size() == 0) return Matrix::Zero(m, n);
  const Matrix A_C = A.submatrix(all_indices(m), s.col_indices.indices);
  const Matrix A_R = A.submatrix(s.row_indices.indices, all_indices(n));
  return (A_C * s.core) * A_R;
}

Matrix reconstruct_dense(const LowRankFactorization& f, Index max_entries) {
  if (f.left.rows() * f.right.cols() > max_entries)
    throw std::length_error("reconstruct_dense: output exceeds the entry guard");
  if (f.left.cols() == 0 || f.right.rows() == 0)
    return Matrix::Zero(f.left.rows(), f.right.cols());
  return f.left * f.right;
}

Vector apply_to_vector(const SkeletonDecomposition& s, const MatrixSource& A,
                       const Vector& v) {
  if (v.size() != s.source_cols)
    throw std::invalid_argument("apply_to_vector: dimension mismatch");
  const Matrix A_R = A.submatrix(s.row_indices.indices, all_indices(s.source_cols));
  const Matrix A_C = A.submatrix(all_indices(s.source_rows), s.col_indices.indices);
  return A_C * (s.core * (A_R * v));
}

Vector apply_to_vector(const LowRankFactorization& f, const Vector& v) {
  if (v.size() != f.right.cols())
    throw std::invalid_argument("apply_to_vector: dimension mismatch");
  return f.left * (f.right * v);
}

namespace {

double difference_norm(const MatrixSource& A, const Matrix& left, const Matrix& right,
                       double tol, int max_iters, std::uint64_t seed) {
  LinearMap map;
  map.rows = A.rows();
  map.cols = A.cols();
  map.apply = [&A, &left, &right](const Vector& x) -> Vector {
    return A.matvec(x) - left * (right * x);
  };
  map.apply_adjoint = [&A, &left, &right](const Vector& x) -> Vector {
    return A.matvec_adjoint(x) - right.adjoint() * (left.adjoint() * x);
  };
  return spectral_norm(map, tol, max_iters, /*block=*/2, seed).value;
}

}  // namespace

double approximation_error_2norm(const MatrixSource& A, const SkeletonDecomposition& s,
                                 double tol, int max_iters, std::uint64_t seed) {
  const Matrix A_C = A.submatrix(all_indices(s.source_rows), s.col_indices.indices);
  const Matrix A_R = A.submatrix(s.row_indices.indices, all_indices(s.source_cols));
  const Matrix left = A_C * s.core;
  return difference_norm(A, left, A_R, tol, max_iters, seed);
}

double approximation_error_2norm(const MatrixSource& A, const LowRankFactorization& f,
                                 double tol, int max_iters, std::uint64_t seed) {
  return difference_norm(A, f.left, f.right, tol, max_iters, seed);
}

}  // namespace sklab
