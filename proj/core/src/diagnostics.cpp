#include "sklab/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "sklab/linalg.hpp"

namespace sklab {

namespace {

Matrix select_rows(const Matrix& M, const std::vector<Index>& ids) {
  Matrix out(static_cast<Index>(ids.size()), M.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) out.row(static_cast<Index>(i)) = M.row(ids[i]);
  return out;
}

Matrix select_columns(const Matrix& M, const std::vector<Index>& ids) {
  Matrix out(M.rows(), static_cast<Index>(ids.size()));
  for (std::size_t j = 0; j < ids.size(); ++j) out.col(static_cast<Index>(j)) = M.col(ids[j]);
  return out;
}

// Exact 2-norm for the desk-scale dense matrices the oracles handle.
double norm2(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
}

// ||M^+|| = 1/sigma_min with full column rank required.
double pinv_norm_full_rank(const Matrix& M, const char* what) {
  const Eigen::JacobiSVD<Matrix> svd_of(M);
  const RealVector& s = svd_of.singularValues();
  const Index r = std::min(M.rows(), M.cols());
  if (M.rows() < M.cols() || s.size() < r || s(r - 1) <= 1e-12 * std::max(s(0), 1.0))
    throw std::invalid_argument(std::string(what) + ": selected block is rank-deficient");
  return 1.0 / s(r - 1);
}

void check_unitary(const Matrix& U, const char* what) {
  if (U.rows() != U.cols()) throw std::invalid_argument(std::string(what) + ": basis not square");
  const Matrix gram = U.adjoint() * U - Matrix::Identity(U.cols(), U.cols());
  if (gram.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument(std::string(what) + ": basis not unitary");
}

}  // namespace

double coherence(const Matrix& X) {
  const Index n = X.rows(), k = X.cols();
  if (k < 1 || n < k) throw std::invalid_argument("coherence: bad shape");
  const Matrix gram = X.adjoint() * X - Matrix::Identity(k, k);
  if (gram.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("coherence: X is not column-orthonormal");
  const double mx = X.cwiseAbs().maxCoeff();
  return static_cast<double>(n) * mx * mx;
}

ErrorMeasures error_measures(const MatrixSource& A, const CoordinateModel& model, Index l) {
  const Index m = A.rows(), n = A.cols(), k = model.X1.cols();
  if (l < 1) throw std::invalid_argument("error_measures: l must be >= 1");

  ErrorMeasures out;
  out.mu_X1 = coherence(model.X1);
  out.mu_Y1 = coherence(model.Y1);
  out.lambda = std::sqrt(static_cast<double>(m) * static_cast<double>(n)) /
               static_cast<double>(l);
  out.lambda_X = std::sqrt(static_cast<double>(m) / static_cast<double>(l));
  out.lambda_Y = std::sqrt(static_cast<double>(n) / static_cast<double>(l));

  if (model.has_full_bases()) {
    const Matrix G = model.X.adjoint() * materialize(A) * model.Y;
    Matrix delta = G;
    delta.topLeftCorner(k, k).setZero();
    out.eps_k = spectral_norm(delta, 1e-9, 1000).value;
    out.eps1_k = delta.cwiseAbs().sum();
    out.eps1_valid = true;
    return out;
  }

  // Only the 2-norm measure is available: power-iterate on
  // A - X1 (X1^H A Y1) Y1^H without materializing anything.
  Matrix AY1(m, k);
  for (Index j = 0; j < k; ++j) AY1.col(j) = A.matvec(model.Y1.col(j));
  const Matrix B11 = model.X1.adjoint() * AY1;  // k x k coefficients

  LinearMap map;
  map.rows = m;
  map.cols = n;
  map.apply = [&](const Vector& x) -> Vector {
    return A.matvec(x) - model.X1 * (B11 * (model.Y1.adjoint() * x));
  };
  map.apply_adjoint = [&](const Vector& x) -> Vector {
    return A.matvec_adjoint(x) - model.Y1 * (B11.adjoint() * (model.X1.adjoint() * x));
  };
  out.eps_k = spectral_norm(map, 1e-9, 1000).value;
  out.eps1_k = std::numeric_limits<double>::quiet_NaN();
  out.eps1_valid = false;
  return out;
}

LiftReport check_lift_column(const Matrix& A, const Matrix& Y, Index k,
                             const IndexSample& C) {
  check_unitary(Y, "check_lift_column");
  const Index n = Y.rows();
  if (A.cols() != n) throw std::invalid_argument("check_lift_column: dimension mismatch");
  if (k < 1 || k > n) throw std::invalid_argument("check_lift_column: k out of range");
  if (C.size() < k) throw std::invalid_argument("check_lift_column: need |C| >= k");

  const Matrix Y1 = Y.leftCols(k), Y2 = Y.rightCols(n - k);
  const Matrix Y1C = select_rows(Y1, C.indices);
  const Matrix Y2C = select_rows(Y2, C.indices);
  const double py = pinv_norm_full_rank(Y1C, "check_lift_column");

  const Matrix AC = select_columns(A, C.indices);
  const Matrix AY2 = A * Y2;

  LiftReport rep;
  rep.terms = {py * norm2(AC), py * norm2(AY2 * Y2C.adjoint()), norm2(AY2)};
  rep.lhs = norm2(A);
  rep.rhs = rep.terms[0] + rep.terms[1] + rep.terms[2];
  rep.slack = rep.rhs - rep.lhs;
  return rep;
}

LiftReport check_lift_rowcol(const Matrix& A, const Matrix& X, const Matrix& Y, Index k,
                             const IndexSample& R, const IndexSample& C) {
  check_unitary(X, "check_lift_rowcol");
  check_unitary(Y, "check_lift_rowcol");
  const Index m = X.rows(), n = Y.rows();
  if (A.rows() != m || A.cols() != n)
    throw std::invalid_argument("check_lift_rowcol: dimension mismatch");
  if (k < 1 || k > std::min(m, n))
    throw std::invalid_argument("check_lift_rowcol: k out of range");

  const Matrix X1 = X.leftCols(k), X2 = X.rightCols(m - k);
  const Matrix Y1 = Y.leftCols(k), Y2 = Y.rightCols(n - k);
  const Matrix X1R = select_rows(X1, R.indices);
  const Matrix X2R = select_rows(X2, R.indices);
  const Matrix Y1C = select_rows(Y1, C.indices);
  const Matrix Y2C = select_rows(Y2, C.indices);
  const double px = pinv_norm_full_rank(X1R, "check_lift_rowcol");
  const double py = pinv_norm_full_rank(Y1C, "check_lift_rowcol");

  const Matrix A_RC = select_columns(select_rows(A, R.indices), C.indices);
  const Matrix X2hA = X2.adjoint() * A;  // (m-k) x n
  const Matrix AY2 = A * Y2;             // m x (n-k)

  LiftReport rep;
  rep.terms = {
      px * py * norm2(A_RC),
      px * py * norm2(X2R * (X2hA * Y1) * Y1C.adjoint()),
      px * py * norm2(X1R * (X1.adjoint() * AY2) * Y2C.adjoint()),
      px * py * norm2(X2R * (X2hA * Y2) * Y2C.adjoint()),
      px * norm2(X1R * (X1.adjoint() * AY2)),
      py * norm2((X2hA * Y1) * Y1C.adjoint()),
      norm2(X2hA * Y2),
  };
  rep.lhs = norm2(A);
  rep.rhs = 0.0;
  for (double t : rep.terms) rep.rhs += t;
  rep.slack = rep.rhs - rep.lhs;
  return rep;
}

ProjectionLiftReport check_lift_projection(const Matrix& A, const Matrix& Y, Index k,
                                           const IndexSample& C) {
  check_unitary(Y, "check_lift_projection");
  const Index n = Y.rows();
  if (A.cols() != n) throw std::invalid_argument("check_lift_projection: dimension mismatch");
  if (k < 1 || k > n) throw std::invalid_argument("check_lift_projection: k out of range");

  const Matrix Y1 = Y.leftCols(k), Y2 = Y.rightCols(n - k);
  const Matrix Y1C = select_rows(Y1, C.indices);
  const Matrix Y2C = select_rows(Y2, C.indices);
  const double py = pinv_norm_full_rank(Y1C, "check_lift_projection");

  const Matrix AC = select_columns(A, C.indices);
  const Matrix residual = A - AC * (pinv(AC) * A);
  const double lhs = norm2(residual);
  const Matrix AY2 = A * Y2;
  const Matrix AY2Y2Ch = AY2 * Y2C.adjoint();

  ProjectionLiftReport rep;
  rep.plain.lhs = lhs;
  rep.plain.terms = {py * norm2(AY2Y2Ch), norm2(AY2)};
  rep.plain.rhs = rep.plain.terms[0] + rep.plain.terms[1];
  rep.plain.slack = rep.plain.rhs - rep.plain.lhs;

  // Strengthened form; both sides reported as square roots.
  const double t1 = norm2(AY2Y2Ch * pinv(Y1C).adjoint());
  const double t2 = norm2(AY2);
  rep.squared.lhs = lhs;
  rep.squared.terms = {t1, t2};
  rep.squared.rhs = std::sqrt(t1 * t1 + t2 * t2);
  rep.squared.slack = rep.squared.rhs - rep.squared.lhs;
  return rep;
}

McBoundsReport montecarlo_sampling_bounds(Index n, Index k, Index l, Basis basis,
                                          int trials, Rng& rng) {
  if (n < 1 || k < 1 || k > n || l < 1)
    throw std::invalid_argument("montecarlo_sampling_bounds: bad arguments");

  Matrix Y(n, k);
  switch (basis) {
    case Basis::unitary_dft: {
      Y = dft_matrix(n).leftCols(k);
      break;
    }
    case Basis::haar_random: {
      Matrix G(n, k);
      for (Index j = 0; j < k; ++j)
        for (Index i = 0; i < n; ++i) G(i, j) = Complex(rng.gaussian(), rng.gaussian());
      Eigen::HouseholderQR<Matrix> qr(G);
      Y = Matrix::Identity(n, k);
      Y = qr.householderQ() * Y;
      break;
    }
    case Basis::identity_spike: {
      Y.setZero();
      for (Index j = 0; j < k; ++j) Y(j, j) = 1.0;
      break;
    }
  }

  McBoundsReport rep;
  rep.n = n;
  rep.k = k;
  rep.l = l;
  rep.trials = trials;
  rep.mu = coherence(Y);
  rep.pinv_bound = 1.53 * std::sqrt(static_cast<double>(n) / static_cast<double>(l));
  rep.norm_bound = 1.31 * std::sqrt(static_cast<double>(l) / static_cast<double>(n));
  rep.regime_ok =
      static_cast<double>(l) >= 10.0 * rep.mu * static_cast<double>(k) *
                                    std::log(static_cast<double>(n));

  for (int t = 0; t < trials; ++t) {
    const IndexSample C = sample_uniform(n, l, rng);
    const Matrix YC = select_rows(Y, C.indices);
    const RealVector s = Eigen::JacobiSVD<Matrix>(YC).singularValues();
    const bool full_rank = s.size() >= k && s(k - 1) > 0.0;
    const bool ok = full_rank && (1.0 / s(k - 1) <= rep.pinv_bound) &&
                    (s(0) <= rep.norm_bound);
    if (!ok) ++rep.failures;
  }
  rep.failure_freq = trials > 0 ? static_cast<double>(rep.failures) / trials : 0.0;
  rep.theorem_bound = 2.0 * static_cast<double>(k) /
                      (static_cast<double>(n) * static_cast<double>(n));
  rep.mc_slack = trials > 0
                     ? 3.0 * std::sqrt(rep.theorem_bound * (1.0 - rep.theorem_bound) /
                                       static_cast<double>(trials))
                     : 0.0;
  rep.pass = !rep.regime_ok || rep.failure_freq <= rep.theorem_bound + rep.mc_slack;
  return rep;
}

Matrix legendre_orthonormal_basis(const std::vector<double>& grid, Index count) {
  const Index n = static_cast<Index>(grid.size());
  if (count < 1 || count > n)
    throw std::invalid_argument("legendre_orthonormal_basis: count out of range");

  RealMatrix V(n, count);
  for (Index i = 0; i < n; ++i) {
    const double x = grid[static_cast<std::size_t>(i)];
    double pm1 = 1.0, p = x;
    V(i, 0) = 1.0;
    if (count > 1) V(i, 1) = x;
    for (Index d = 2; d < count; ++d) {
      const double next =
          ((2.0 * static_cast<double>(d) - 1.0) * x * p -
           (static_cast<double>(d) - 1.0) * pm1) /
          static_cast<double>(d);
      V(i, d) = next;
      pm1 = p;
      p = next;
    }
  }

  // Modified Gram-Schmidt, two passes. High-degree columns on a uniform grid
  // can cancel to noise; a canonical vector stands in so the result stays
  // orthonormal. Everything is real; cast at the end.
  RealMatrix Q = V;
  for (Index j = 0; j < count; ++j) {
    const double original = Q.col(j).norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Index i = 0; i < j; ++i) Q.col(j) -= Q.col(i).dot(Q.col(j)) * Q.col(i);
    double nrm = Q.col(j).norm();
    Index fallback = j % n;
    while (nrm <= 1e-10 * std::max(original, 1.0)) {
      Q.col(j).setZero();
      Q(fallback, j) = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (Index i = 0; i < j; ++i) Q.col(j) -= Q.col(i).dot(Q.col(j)) * Q.col(i);
      nrm = Q.col(j).norm();
      fallback = (fallback + 1) % n;
    }
    Q.col(j) /= nrm;
  }
  return Q.cast<Complex>();
}

}  // namespace sklab
