#include "sklab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

extern "C" void zgesdd_(const char* jobz, const int* m, const int* n,
                        sklab::Complex* a, const int* lda, double* s,
                        sklab::Complex* u, const int* ldu, sklab::Complex* vt,
                        const int* ldvt, sklab::Complex* work, const int* lwork,
                        double* rwork, int* iwork, int* info);

namespace sklab {

namespace {

// Thin SVD via LAPACK divide-and-conquer. Falls back to Eigen if the
// iteration fails (info > 0), which is rare but documented for gesdd.
void thin_svd(const Matrix& M, Matrix& U, RealVector& sigma, Matrix& V) {
  const Index m = M.rows(), n = M.cols(), r = std::min(m, n);
  if (r == 0) {
    U.resize(m, 0);
    sigma.resize(0);
    V.resize(n, 0);
    return;
  }

  Matrix A = M;  // zgesdd destroys its input
  U.resize(m, r);
  sigma.resize(r);
  Matrix VT(r, n);

  const int im = static_cast<int>(m), in = static_cast<int>(n), ir = static_cast<int>(r);
  const Index mx = std::max(m, n);
  std::vector<double> rwork(static_cast<std::size_t>(
      r * std::max<Index>(5 * r + 7, 2 * mx + 2 * r + 1) + 64));
  std::vector<int> iwork(static_cast<std::size_t>(8 * r + 8));
  int info = 0, lwork = -1;
  Complex wq;
  zgesdd_("S", &im, &in, A.data(), &im, sigma.data(), U.data(), &im, VT.data(),
          &ir, &wq, &lwork, rwork.data(), iwork.data(), &info);
  if (info == 0) {
    lwork = static_cast<int>(wq.real()) + 64;
    std::vector<Complex> work(static_cast<std::size_t>(lwork));
    zgesdd_("S", &im, &in, A.data(), &im, sigma.data(), U.data(), &im,
            VT.data(), &ir, work.data(), &lwork, rwork.data(), iwork.data(),
            &info);
  }
  if (info != 0) {
    Eigen::BDCSVD<Matrix> fallback(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    U = fallback.matrixU();
    sigma = fallback.singularValues();
    V = fallback.matrixV();
    return;
  }
  V = VT.adjoint();
}

Matrix seeded_gaussian(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix G(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) G(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return G;
}

Matrix orthonormalize(const Matrix& M) {
  Eigen::HouseholderQR<Matrix> qr(M);
  Matrix Q = Matrix::Identity(M.rows(), M.cols());
  Q = qr.householderQ() * Q;
  return Q;
}

}  // namespace

LinearMap LinearMap::from_dense(const Matrix& M) {
  auto held = std::make_shared<Matrix>(M);
  LinearMap map;
  map.rows = M.rows();
  map.cols = M.cols();
  map.apply = [held](const Vector& x) -> Vector { return *held * x; };
  map.apply_adjoint = [held](const Vector& x) -> Vector { return held->adjoint() * x; };
  return map;
}

TruncatedSVD svd(const Matrix& M) {
  if (!M.allFinite()) throw std::invalid_argument("svd: matrix has non-finite entries");

  Matrix U, V;
  RealVector sigma;
  thin_svd(M, U, sigma, V);

  // Keep only strictly positive singular values.
  Index r = 0;
  while (r < sigma.size() && sigma(r) > 0.0) ++r;

  TruncatedSVD out;
  out.U = U.leftCols(r);
  out.sigma = sigma.head(r);
  out.V = V.leftCols(r);
  out.delta = 0.0;
  out.kept = r;
  return out;
}

namespace {

Matrix pinv_from_svd(const TruncatedSVD& f, double delta) {
  Index kk = 0;
  while (kk < f.sigma.size() && f.sigma(kk) >= delta) ++kk;
  if (kk == 0) return Matrix::Zero(f.V.rows(), f.U.rows());
  return f.V.leftCols(kk) * f.sigma.head(kk).cwiseInverse().asDiagonal() *
         f.U.leftCols(kk).adjoint();
}

}  // namespace

Matrix pinv_threshold(const Matrix& M, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("pinv_threshold: delta must be > 0");
  return pinv_from_svd(svd(M), delta);
}

Matrix pinv(const Matrix& M) {
  TruncatedSVD f = svd(M);
  if (f.sigma.size() == 0) return Matrix::Zero(M.cols(), M.rows());
  const double cutoff = f.sigma(0) * static_cast<double>(std::max(M.rows(), M.cols())) *
                        std::numeric_limits<double>::epsilon();
  return pinv_from_svd(f, std::max(cutoff, std::numeric_limits<double>::min()));
}

ColumnSelection rrqr_select(const Matrix& M, Index k) {
  const Index l = M.cols();
  if (k < 1 || k > l) throw std::invalid_argument("rrqr_select: k out of range");

  Eigen::ColPivHouseholderQR<Matrix> qr(M);
  const auto& perm = qr.colsPermutation().indices();

  ColumnSelection out;
  out.indices.assign(perm.data(), perm.data() + k);
  out.bound_factor = std::sqrt(1.0 + 2.0 * static_cast<double>(k) *
                                         static_cast<double>(l - k));

  Matrix selected(M.rows(), k);
  for (Index j = 0; j < k; ++j) selected.col(j) = M.col(out.indices[static_cast<std::size_t>(j)]);
  const Matrix Q = orthonormalize(selected);
  const Matrix residual = M - Q * (Q.adjoint() * M);
  out.residual_norm = spectral_norm(residual, 1e-8, 300);
  return out;
}

SpectralNormResult spectral_norm(const LinearMap& map, double tol, int max_iters,
                                 int block, std::uint64_t seed) {
  if (!(tol > 0.0)) throw std::invalid_argument("spectral_norm: tol must be > 0");
  SpectralNormResult result;
  const Index m = map.rows, n = map.cols;
  if (m == 0 || n == 0) {
    result.converged = true;
    return result;
  }
  const Index b = std::max<Index>(1, std::min<Index>(block, std::min(m, n)));

  Matrix Q = orthonormalize(seeded_gaussian(n, b, seed));
  Matrix W(m, b);
  double prev = -1.0;
  for (int it = 1; it <= max_iters; ++it) {
    for (Index j = 0; j < b; ++j) W.col(j) = map.apply(Q.col(j));
    const double est = Eigen::JacobiSVD<Matrix>(W).singularValues()(0);
    result.value = std::max(result.value, est);
    result.iterations = it;
    if (prev >= 0.0 && std::abs(est - prev) <= tol * std::max(est, 1e-300)) {
      result.converged = true;
      break;
    }
    prev = est;
    Matrix Z(n, b);
    for (Index j = 0; j < b; ++j) Z.col(j) = map.apply_adjoint(W.col(j));
    if (Z.norm() == 0.0) {  // hit the kernel exactly; estimate is final
      result.converged = true;
      break;
    }
    Q = orthonormalize(Z);
  }
  return result;
}

SpectralNormResult spectral_norm(const Matrix& M, double tol, int max_iters,
                                 int block, std::uint64_t seed) {
  return spectral_norm(LinearMap::from_dense(M), tol, max_iters, block, seed);
}

Matrix dft_matrix_rows(Index n, const std::vector<Index>& rows) {
  if (n < 1) throw std::invalid_argument("dft_matrix_rows: n must be >= 1");
  for (Index j : rows)
    if (j < 0 || j >= n) throw std::out_of_range("dft_matrix_rows: row index out of range");

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  Matrix F(static_cast<Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const long long j = static_cast<long long>(rows[r]);
    for (Index l = 0; l < n; ++l) {
      const long long phase = (j * static_cast<long long>(l)) % static_cast<long long>(n);
      F(static_cast<Index>(r), l) = scale * std::polar(1.0, step * static_cast<double>(phase));
    }
  }
  return F;
}

Matrix dft_matrix(Index n) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  return dft_matrix_rows(n, all);
}

RealVector random_sign_diagonal(Index n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("random_sign_diagonal: n must be >= 1");
  RealVector d(n);
  for (Index i = 0; i < n; ++i) d(i) = rng.below(2) ? 1.0 : -1.0;
  return d;
}

Matrix haar_unitary(Index n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("haar_unitary: n must be >= 1");
  Matrix G(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) G(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = Matrix::Identity(n, n);
  Q = qr.householderQ() * Q;
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const Complex r = R(j, j);
    const double a = std::abs(r);
    Q.col(j) *= (a > 0.0) ? r / a : Complex(1.0, 0.0);
  }
  return Q;
}

}  // namespace sklab
