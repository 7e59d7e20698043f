#pragma once

#include <vector>

#include "sklab/matsource.hpp"
#include "sklab/rng.hpp"
#include "sklab/sampling.hpp"
#include "sklab/types.hpp"

namespace sklab {

/// mu = n * max_ij |X_ij|^2 for a column-orthonormal X; the smallest mu for
/// which X is mu-coherent. Throws if X is not orthonormal to 1e-10.
double coherence(const Matrix& X);

/// The error measures of the coordinate model: eps_k (2-norm of the
/// off-block residual), eps1_k (entrywise l1 norm of its coefficients,
/// needs full bases), the factor coherences and the sampling amplification
/// factors for a given l.
struct ErrorMeasures {
  double eps_k = 0.0;
  double eps1_k = 0.0;
  bool eps1_valid = false;
  double mu_X1 = 0.0;
  double mu_Y1 = 0.0;
  double lambda = 0.0;    // sqrt(m n) / l
  double lambda_X = 0.0;  // sqrt(m / l)
  double lambda_Y = 0.0;  // sqrt(n / l)
};

ErrorMeasures error_measures(const MatrixSource& A, const CoordinateModel& model, Index l);

/// One evaluated inequality: lhs <= rhs with slack = rhs - lhs. The
/// inequalities are theorems, so slack < 0 beyond rounding indicates a bug
/// in the linear algebra underneath.
struct LiftReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::vector<double> terms;  // the summands of rhs
};

/// ||A|| <= ||Y_{1,C:}^+|| ||A_{:C}|| + ||Y_{1,C:}^+|| ||A Y_2 Y_{2,C:}^H||
///          + ||A Y_2||.
LiftReport check_lift_column(const Matrix& A, const Matrix& Y, Index k,
                             const IndexSample& C);

/// The seven-term bound on ||A|| through ||A_RC|| (row and column
/// restriction undone at once).
LiftReport check_lift_rowcol(const Matrix& A, const Matrix& X, const Matrix& Y, Index k,
                             const IndexSample& R, const IndexSample& C);

struct ProjectionLiftReport {
  LiftReport plain;    // ||A - P A|| <= ||Y1C^+|| ||A Y2 Y2C^H|| + ||A Y2||
  LiftReport squared;  // strengthened form, reported as square roots
};

/// P = A_{:C} A_{:C}^+, both the plain and the strengthened bound.
ProjectionLiftReport check_lift_projection(const Matrix& A, const Matrix& Y, Index k,
                                           const IndexSample& C);

/// Empirical check of the row-sampling isometry bounds: frequency of
/// { ||Y_C^+|| <= 1.53 sqrt(n/l) and ||Y_C|| <= 1.31 sqrt(l/n) } over
/// independent l-row samples of a mu-coherent n x k basis. The theoretical
/// failure bound 2 k n^{-2} applies in the regime l >= 10 mu k ln n;
/// outside it the report is descriptive.
struct McBoundsReport {
  Index n = 0, k = 0, l = 0;
  int trials = 0;
  double mu = 0.0;
  double pinv_bound = 0.0;  // 1.53 sqrt(n/l)
  double norm_bound = 0.0;  // 1.31 sqrt(l/n)
  int failures = 0;
  double failure_freq = 0.0;
  double theorem_bound = 0.0;  // 2 k / n^2
  double mc_slack = 0.0;       // 3 binomial standard deviations at the bound
  bool regime_ok = false;
  bool pass = false;  // failure_freq <= theorem_bound + mc_slack (when in regime)
};

McBoundsReport montecarlo_sampling_bounds(Index n, Index k, Index l, Basis basis,
                                          int trials, Rng& rng);

/// Legendre polynomials evaluated on `grid` and orthonormalized
/// (Gram-Schmidt with reorthogonalization): an n x count column-orthonormal
/// matrix whose leading columns are the discrete Legendre modes.
Matrix legendre_orthonormal_basis(const std::vector<double>& grid, Index count);

}  // namespace sklab
