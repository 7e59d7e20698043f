#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "sklab/types.hpp"

namespace sklab {

/// Uniform read access to an m x n complex matrix. Entries are deterministic
/// (repeated reads of the same (i, j) are bit-identical) and sources are
/// immutable after construction, so concurrent reads are safe.
class MatrixSource {
 public:
  virtual ~MatrixSource() = default;

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  Complex entry(Index i, Index j) const;

  virtual bool has_fast_matvec() const { return false; }

  /// y = A x. The default streams over all entries.
  virtual Vector matvec(const Vector& x) const;
  /// y = A^H x.
  virtual Vector matvec_adjoint(const Vector& x) const;

  /// Dense block A(row_ids, col_ids); duplicates in the index lists are
  /// allowed and produce duplicated rows/columns.
  virtual Matrix submatrix(const std::vector<Index>& row_ids,
                           const std::vector<Index>& col_ids) const;

 protected:
  MatrixSource(Index rows, Index cols);
  virtual Complex entry_impl(Index i, Index j) const = 0;

 private:
  Index rows_;
  Index cols_;
};

using SourcePtr = std::shared_ptr<const MatrixSource>;

/// Source backed by an explicit dense array.
class DenseSource final : public MatrixSource {
 public:
  explicit DenseSource(Matrix values);

  bool has_fast_matvec() const override { return true; }
  Vector matvec(const Vector& x) const override;
  Vector matvec_adjoint(const Vector& x) const override;
  Matrix submatrix(const std::vector<Index>& row_ids,
                   const std::vector<Index>& col_ids) const override;

  const Matrix& values() const { return values_; }

 protected:
  Complex entry_impl(Index i, Index j) const override { return values_(i, j); }

 private:
  Matrix values_;
};

SourcePtr dense_source(const Matrix& values);
SourcePtr dense_source(const std::vector<std::vector<Complex>>& values);

/// (A)_ij = scale * kernel(grid_x[i], grid_y[j]); non-finite kernel values
/// throw at evaluation time.
SourcePtr kernel_source(std::function<double(double, double)> kernel,
                        std::vector<double> grid_x, std::vector<double> grid_y,
                        double scale = 1.0);

/// n uniformly spaced points on [-1, 1], both endpoints included.
std::vector<double> uniform_grid(Index n);

enum class Basis { unitary_dft, haar_random, identity_spike };

/// Synthetic model A = X diag(sigma) Y^H with unitary X, Y chosen by `basis`.
struct SyntheticModelSpec {
  Index n = 0;
  Index k = 0;
  RealVector singular_values;  // length n, nonincreasing, nonnegative
  Basis basis = Basis::unitary_dft;
  std::uint64_t seed = 0;  // consumed by haar_random

  /// sigma_1..sigma_k logarithmically spaced from 1 down to eps_k,
  /// sigma_{k+1}..sigma_n all equal to eps_k.
  static SyntheticModelSpec log_spaced(Index n, Index k, double eps_k,
                                       Basis basis = Basis::unitary_dft);
  /// sigma_1..sigma_k = 1, sigma_{k+1}..sigma_n = tail.
  static SyntheticModelSpec flat_head(Index n, Index k, double tail,
                                      Basis basis = Basis::unitary_dft);
};

/// Exact coordinates of a model A ~ X1 A11 Y1^H: orthonormal factors, the
/// leading coefficient block, and (when affordable) the full unitary bases
/// needed for the l1 error measure.
struct CoordinateModel {
  Matrix X1;   // m x k
  Matrix Y1;   // n x k
  Matrix A11;  // k x k
  Matrix X;    // m x m, empty when not materialized
  Matrix Y;    // n x n, empty when not materialized

  bool has_full_bases() const { return X.size() > 0 && Y.size() > 0; }
};

struct SyntheticModel {
  SourcePtr source;
  CoordinateModel model;
};

/// Builds the model matrix of `spec` together with its exact CoordinateModel.
/// Full bases are materialized for n <= 1024.
SyntheticModel synthetic_fourier_source(const SyntheticModelSpec& spec);

/// Wrapper that counts entry reads (one per entry; submatrix adds rows*cols;
/// matvecs add rows*cols since streaming reads everything). Used to audit
/// the sublinearity contract of the sampling algorithms.
class CountingSource final : public MatrixSource {
 public:
  CountingSource(SourcePtr inner, std::shared_ptr<std::atomic<std::uint64_t>> counter);

  bool has_fast_matvec() const override { return inner_->has_fast_matvec(); }
  Vector matvec(const Vector& x) const override;
  Vector matvec_adjoint(const Vector& x) const override;
  Matrix submatrix(const std::vector<Index>& row_ids,
                   const std::vector<Index>& col_ids) const override;

  std::uint64_t reads() const { return counter_->load(); }

 protected:
  Complex entry_impl(Index i, Index j) const override;

 private:
  SourcePtr inner_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

std::shared_ptr<CountingSource> counting_source(SourcePtr inner);

/// Dense copy of the whole matrix; refuses to materialize beyond the entry
/// guard (default 1e8 entries).
Matrix materialize(const MatrixSource& source, Index max_entries = 100000000);

/// Dense-cached copy of `source` (fast matvec); for measurement paths where
/// repeated entry evaluation would dominate.
SourcePtr materialized_source(const MatrixSource& source, Index max_entries = 100000000);

}  // namespace sklab
