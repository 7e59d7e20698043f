#include "sklab/matsource.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sklab/linalg.hpp"
#include "sklab/rng.hpp"

namespace sklab {

MatrixSource::MatrixSource(Index rows, Index cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("MatrixSource: dimensions must be positive");
}

Complex MatrixSource::entry(Index i, Index j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw std::out_of_range("MatrixSource::entry: index out of range");
  return entry_impl(i, j);
}

Vector MatrixSource::matvec(const Vector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("matvec: dimension mismatch");
  Vector y = Vector::Zero(rows_);
  for (Index i = 0; i < rows_; ++i) {
    Complex acc = 0.0;
    for (Index j = 0; j < cols_; ++j) acc += entry_impl(i, j) * x(j);
    y(i) = acc;
  }
  return y;
}

Vector MatrixSource::matvec_adjoint(const Vector& x) const {
  if (x.size() != rows_) throw std::invalid_argument("matvec_adjoint: dimension mismatch");
  Vector y = Vector::Zero(cols_);
  for (Index i = 0; i < rows_; ++i) {
    const Complex xi = x(i);
    for (Index j = 0; j < cols_; ++j) y(j) += std::conj(entry_impl(i, j)) * xi;
  }
  return y;
}

Matrix MatrixSource::submatrix(const std::vector<Index>& row_ids,
                               const std::vector<Index>& col_ids) const {
  Matrix block(static_cast<Index>(row_ids.size()), static_cast<Index>(col_ids.size()));
  for (std::size_t j = 0; j < col_ids.size(); ++j)
    for (std::size_t i = 0; i < row_ids.size(); ++i)
      block(static_cast<Index>(i), static_cast<Index>(j)) =
          entry(row_ids[i], col_ids[j]);
  return block;
}

DenseSource::DenseSource(Matrix values)
    : MatrixSource(values.rows(), values.cols()), values_(std::move(values)) {}

Vector DenseSource::matvec(const Vector& x) const {
  if (x.size() != cols()) throw std::invalid_argument("matvec: dimension mismatch");
  return values_ * x;
}

Vector DenseSource::matvec_adjoint(const Vector& x) const {
  if (x.size() != rows()) throw std::invalid_argument("matvec_adjoint: dimension mismatch");
  return values_.adjoint() * x;
}

Matrix DenseSource::submatrix(const std::vector<Index>& row_ids,
                              const std::vector<Index>& col_ids) const {
  Matrix block(static_cast<Index>(row_ids.size()), static_cast<Index>(col_ids.size()));
  for (std::size_t j = 0; j < col_ids.size(); ++j) {
    const Index c = col_ids[j];
    if (c < 0 || c >= cols()) throw std::out_of_range("submatrix: column out of range");
    for (std::size_t i = 0; i < row_ids.size(); ++i) {
      const Index r = row_ids[i];
      if (r < 0 || r >= rows()) throw std::out_of_range("submatrix: row out of range");
      block(static_cast<Index>(i), static_cast<Index>(j)) = values_(r, c);
    }
  }
  return block;
}

SourcePtr dense_source(const Matrix& values) {
  if (values.rows() == 0 || values.cols() == 0)
    throw std::invalid_argument("dense_source: empty array");
  return std::make_shared<DenseSource>(values);
}

SourcePtr dense_source(const std::vector<std::vector<Complex>>& values) {
  if (values.empty() || values.front().empty())
    throw std::invalid_argument("dense_source: empty array");
  const std::size_t ncols = values.front().size();
  Matrix M(static_cast<Index>(values.size()), static_cast<Index>(ncols));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != ncols)
      throw std::invalid_argument("dense_source: ragged array");
    for (std::size_t j = 0; j < ncols; ++j)
      M(static_cast<Index>(i), static_cast<Index>(j)) = values[i][j];
  }
  return std::make_shared<DenseSource>(std::move(M));
}

namespace {

class KernelSource final : public MatrixSource {
 public:
  KernelSource(std::function<double(double, double)> kernel, std::vector<double> gx,
               std::vector<double> gy, double scale)
      : MatrixSource(static_cast<Index>(gx.size()), static_cast<Index>(gy.size())),
        kernel_(std::move(kernel)),
        gx_(std::move(gx)),
        gy_(std::move(gy)),
        scale_(scale) {}

 protected:
  Complex entry_impl(Index i, Index j) const override {
    const double v = scale_ * kernel_(gx_[static_cast<std::size_t>(i)],
                                      gy_[static_cast<std::size_t>(j)]);
    if (!std::isfinite(v))
      throw std::domain_error("kernel_source: non-finite kernel value");
    return Complex(v, 0.0);
  }

 private:
  std::function<double(double, double)> kernel_;
  std::vector<double> gx_;
  std::vector<double> gy_;
  double scale_;
};

// A = F diag(sigma) F^H is circulant; only its first column is stored.
class CirculantDftSource final : public MatrixSource {
 public:
  CirculantDftSource(Index n, const RealVector& sigma)
      : MatrixSource(n, n), column_(n) {
    // c[d] = (1/n) sum_p sigma_p w^(d p), w = exp(-2 pi i / n), with exact
    // phase table lookup so the reconstruction invariant holds at 1e-12.
    std::vector<Complex> roots(static_cast<std::size_t>(n));
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (Index t = 0; t < n; ++t)
      roots[static_cast<std::size_t>(t)] = std::polar(1.0, step * static_cast<double>(t));
    for (Index d = 0; d < n; ++d) {
      Complex acc = 0.0;
      for (Index p = 0; p < n; ++p) {
        const long long t = (static_cast<long long>(d) * p) % n;
        acc += sigma(p) * roots[static_cast<std::size_t>(t)];
      }
      column_[static_cast<std::size_t>(d)] = acc / static_cast<double>(n);
    }
  }

  bool has_fast_matvec() const override { return true; }

  Vector matvec(const Vector& x) const override {
    if (x.size() != cols()) throw std::invalid_argument("matvec: dimension mismatch");
    const Index n = rows();
    Vector y = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
      Complex acc = 0.0;
      for (Index j = 0; j < n; ++j) acc += at(i, j) * x(j);
      y(i) = acc;
    }
    return y;
  }

  Vector matvec_adjoint(const Vector& x) const override {
    if (x.size() != rows()) throw std::invalid_argument("matvec_adjoint: dimension mismatch");
    const Index n = rows();
    Vector y = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
      const Complex xi = x(i);
      for (Index j = 0; j < n; ++j) y(j) += std::conj(at(i, j)) * xi;
    }
    return y;
  }

 protected:
  Complex entry_impl(Index i, Index j) const override { return at(i, j); }

 private:
  Complex at(Index i, Index j) const {
    Index d = i - j;
    if (d < 0) d += rows();
    return column_[static_cast<std::size_t>(d)];
  }

  std::vector<Complex> column_;
};

// A = X diag(sigma) Y^H with explicitly stored factors.
class FactoredSource final : public MatrixSource {
 public:
  FactoredSource(Matrix X_sigma, Matrix Y)
      : MatrixSource(X_sigma.rows(), Y.rows()),
        left_(std::move(X_sigma)),
        right_(std::move(Y)) {}

  bool has_fast_matvec() const override { return true; }

  Vector matvec(const Vector& x) const override {
    return left_ * (right_.adjoint() * x);
  }
  Vector matvec_adjoint(const Vector& x) const override {
    return right_ * (left_.adjoint() * x);
  }

 protected:
  Complex entry_impl(Index i, Index j) const override {
    return (left_.row(i).array() * right_.row(j).array().conjugate()).sum();
  }

 private:
  Matrix left_;   // X diag(sigma), m x r
  Matrix right_;  // Y, n x r
};

class DiagonalSource final : public MatrixSource {
 public:
  DiagonalSource(Index n, RealVector sigma)
      : MatrixSource(n, n), sigma_(std::move(sigma)) {}

  bool has_fast_matvec() const override { return true; }

  Vector matvec(const Vector& x) const override {
    if (x.size() != cols()) throw std::invalid_argument("matvec: dimension mismatch");
    return sigma_.cast<Complex>().asDiagonal() * x;
  }
  Vector matvec_adjoint(const Vector& x) const override { return matvec(x); }

 protected:
  Complex entry_impl(Index i, Index j) const override {
    return i == j ? Complex(sigma_(i), 0.0) : Complex(0.0, 0.0);
  }

 private:
  RealVector sigma_;
};

void validate_spec(const SyntheticModelSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("synthetic_fourier_source: n must be >= 1");
  if (spec.k < 0 || spec.k > spec.n)
    throw std::invalid_argument("synthetic_fourier_source: k out of range");
  if (spec.singular_values.size() != spec.n)
    throw std::invalid_argument("synthetic_fourier_source: need n singular values");
  for (Index i = 0; i < spec.n; ++i) {
    if (spec.singular_values(i) < 0.0)
      throw std::invalid_argument("synthetic_fourier_source: negative singular value");
    if (i > 0 && spec.singular_values(i) > spec.singular_values(i - 1))
      throw std::invalid_argument("synthetic_fourier_source: singular values must be nonincreasing");
  }
}

constexpr Index kFullBasisLimit = 1024;

}  // namespace

SourcePtr kernel_source(std::function<double(double, double)> kernel,
                        std::vector<double> grid_x, std::vector<double> grid_y,
                        double scale) {
  if (grid_x.empty() || grid_y.empty())
    throw std::invalid_argument("kernel_source: empty grid");
  return std::make_shared<KernelSource>(std::move(kernel), std::move(grid_x),
                                        std::move(grid_y), scale);
}

std::vector<double> uniform_grid(Index n) {
  if (n < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] =
        -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

SyntheticModelSpec SyntheticModelSpec::log_spaced(Index n, Index k, double eps_k, Basis basis) {
  SyntheticModelSpec spec;
  spec.n = n;
  spec.k = k;
  spec.basis = basis;
  spec.singular_values = RealVector::Constant(n, eps_k);
  for (Index i = 0; i < k; ++i) {
    const double t = (k > 1) ? static_cast<double>(i) / static_cast<double>(k - 1) : 0.0;
    spec.singular_values(i) = std::pow(eps_k, t);  // 1 down to eps_k, geometric
  }
  return spec;
}

SyntheticModelSpec SyntheticModelSpec::flat_head(Index n, Index k, double tail, Basis basis) {
  SyntheticModelSpec spec;
  spec.n = n;
  spec.k = k;
  spec.basis = basis;
  spec.singular_values = RealVector::Constant(n, tail);
  spec.singular_values.head(k).setOnes();
  return spec;
}

SyntheticModel synthetic_fourier_source(const SyntheticModelSpec& spec) {
  validate_spec(spec);
  const Index n = spec.n, k = spec.k;
  const RealVector& sigma = spec.singular_values;

  SyntheticModel out;
  out.model.A11 = sigma.head(k).cast<Complex>().asDiagonal();

  switch (spec.basis) {
    case Basis::unitary_dft: {
      out.source = std::make_shared<CirculantDftSource>(n, sigma);
      const Matrix F = dft_matrix(n);
      out.model.X1 = F.leftCols(k);
      out.model.Y1 = F.leftCols(k);
      if (n <= kFullBasisLimit) {
        out.model.X = F;
        out.model.Y = F;
      }
      break;
    }
    case Basis::haar_random: {
      if (n > 2048)
        throw std::invalid_argument("synthetic_fourier_source: haar basis limited to n <= 2048");
      Rng rng(spec.seed);
      const Matrix X = haar_unitary(n, rng);
      const Matrix Y = haar_unitary(n, rng);
      out.source = std::make_shared<FactoredSource>(X * sigma.cast<Complex>().asDiagonal(), Y);
      out.model.X1 = X.leftCols(k);
      out.model.Y1 = Y.leftCols(k);
      if (n <= kFullBasisLimit) {
        out.model.X = X;
        out.model.Y = Y;
      }
      break;
    }
    case Basis::identity_spike: {
      out.source = std::make_shared<DiagonalSource>(n, sigma);
      Matrix I1 = Matrix::Zero(n, k);
      for (Index j = 0; j < k; ++j) I1(j, j) = 1.0;
      out.model.X1 = I1;
      out.model.Y1 = I1;
      if (n <= kFullBasisLimit) {
        out.model.X = Matrix::Identity(n, n);
        out.model.Y = Matrix::Identity(n, n);
      }
      break;
    }
  }
  return out;
}

CountingSource::CountingSource(SourcePtr inner,
                               std::shared_ptr<std::atomic<std::uint64_t>> counter)
    : MatrixSource(inner->rows(), inner->cols()),
      inner_(std::move(inner)),
      counter_(std::move(counter)) {}

Complex CountingSource::entry_impl(Index i, Index j) const {
  counter_->fetch_add(1, std::memory_order_relaxed);
  return inner_->entry(i, j);
}

Vector CountingSource::matvec(const Vector& x) const {
  counter_->fetch_add(static_cast<std::uint64_t>(rows()) * static_cast<std::uint64_t>(cols()),
                      std::memory_order_relaxed);
  return inner_->matvec(x);
}

Vector CountingSource::matvec_adjoint(const Vector& x) const {
  counter_->fetch_add(static_cast<std::uint64_t>(rows()) * static_cast<std::uint64_t>(cols()),
                      std::memory_order_relaxed);
  return inner_->matvec_adjoint(x);
}

Matrix CountingSource::submatrix(const std::vector<Index>& row_ids,
                                 const std::vector<Index>& col_ids) const {
  counter_->fetch_add(static_cast<std::uint64_t>(row_ids.size()) * col_ids.size(),
                      std::memory_order_relaxed);
  return inner_->submatrix(row_ids, col_ids);
}

std::shared_ptr<CountingSource> counting_source(SourcePtr inner) {
  return std::make_shared<CountingSource>(std::move(inner),
                                          std::make_shared<std::atomic<std::uint64_t>>(0));
}

Matrix materialize(const MatrixSource& source, Index max_entries) {
  if (source.rows() * source.cols() > max_entries)
    throw std::length_error("materialize: matrix exceeds the entry guard");
  std::vector<Index> ri(static_cast<std::size_t>(source.rows()));
  std::vector<Index> ci(static_cast<std::size_t>(source.cols()));
  for (Index i = 0; i < source.rows(); ++i) ri[static_cast<std::size_t>(i)] = i;
  for (Index j = 0; j < source.cols(); ++j) ci[static_cast<std::size_t>(j)] = j;
  return source.submatrix(ri, ci);
}

SourcePtr materialized_source(const MatrixSource& source, Index max_entries) {
  return std::make_shared<DenseSource>(materialize(source, max_entries));
}

}  // namespace sklab
