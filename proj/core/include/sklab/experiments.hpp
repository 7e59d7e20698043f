#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sklab/diagnostics.hpp"
#include "sklab/matsource.hpp"
#include "sklab/skeleton.hpp"
#include "sklab/types.hpp"

namespace sklab {

/// Invalid experiment configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One benchmark trial row. Unknown measures are NaN.
struct ExperimentRecord {
  std::string experiment;
  int trial = 0;
  std::uint64_t seed = 0;
  Index m = 0, n = 0, l = 0, k = 0;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double err2 = std::numeric_limits<double>::quiet_NaN();
  double err2_rel = std::numeric_limits<double>::quiet_NaN();
  double eps_k = std::numeric_limits<double>::quiet_NaN();
  double eps1_k = std::numeric_limits<double>::quiet_NaN();
  double runtime_ms = 0.0;
  std::string algorithm_tag = "none";
  std::uint64_t entry_reads = 0;
};

struct ExperimentOutput {
  std::vector<std::string> comments;  // emitted as leading '#' lines
  std::vector<ExperimentRecord> records;
};

std::string csv_header();
/// Comments, header, one row per record; floats at 17 significant digits so
/// the file is lossless and reruns with timing disabled are byte-identical.
void write_csv(std::ostream& out, const ExperimentOutput& output);
void write_csv_file(const std::string& path, const ExperimentOutput& output);

/// Runs fn(trial) for trial in [0, count) on a small worker pool; results
/// must be written to per-trial slots so scheduling cannot change output.
void parallel_trials(int count, int threads, const std::function<void(int)>& fn);

/// Least-squares slope of log10(y) against log10(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// --- model builders shared by the drivers and the acceptance suite ---

struct BenchModel {
  SourcePtr source;       // measurement-ready (fast matvec)
  CoordinateModel model;  // exact coordinates when the model is synthetic
  double norm2 = 1.0;     // ||A||
  double eps_k = std::numeric_limits<double>::quiet_NaN();
  double eps1_k = std::numeric_limits<double>::quiet_NaN();
};

/// Toy spectrum: sigma_1..sigma_k log-spaced 1 -> eps_k, flat eps_k tail,
/// DFT bases.
BenchModel toy_fourier_model(Index n, Index k, double eps_k);
/// Flat head: sigma_1..k = 1, tail = eps, DFT bases.
BenchModel flat_head_model(Index n, Index k, double eps);
/// Exact rank k (unit singular values, zero tail) in the chosen basis.
BenchModel exact_rank_model(Index n, Index k, Basis basis, std::uint64_t seed = 0);
/// exp(x y) kernel on an n-point uniform grid of [-1,1], scaled to ||A|| = 1.
BenchModel exp_kernel_model(Index n);
/// Sum of low-degree Chebyshev products with a tiny high-degree term and
/// 1e-9 Gaussian noise, scaled to ||A|| ~ 1; coefficients drawn from
/// coeff_seed and reported through *coeffs/*scale.
BenchModel chebyshev_kernel_model(Index n, std::uint64_t coeff_seed,
                                  std::vector<double>* coeffs = nullptr,
                                  double* scale = nullptr);

/// Uniform-sampling factorization with the data-driven delta: one sample,
/// one l x l extraction, delta = max(heuristic_delta(A_RC), floor).
SkeletonDecomposition skeleton_uniform_k3_heuristic(const MatrixSource& A, Index l,
                                                    Index k, double floor_delta,
                                                    Rng& rng, double* delta_out = nullptr);

// --- experiment drivers ---

struct VCurveConfig {
  Index n = 301;
  Index l = 100;
  std::vector<Index> ks = {3, 9, 21};
  double eps_k = 1e-15;
  std::vector<double> deltas;  // empty -> 1e-13..1e-2, one point per decade
  int trials = 20;
  std::uint64_t seed = 0;
  bool timing = true;
  int threads = 0;  // 0 = hardware concurrency
};
ExperimentOutput run_vcurve(const VCurveConfig& config);

struct ScalingConfig {
  std::vector<Index> ns = {100, 200, 400, 800, 1600};
  Index k = 9;
  Index l = 40;
  std::vector<double> eps_list = {1e-6, 1e-8, 1e-10};
  int trials = 20;
  std::uint64_t seed = 0;
  bool timing = true;
  int threads = 0;
};
ExperimentOutput run_scaling(const ScalingConfig& config);

enum class KernelKind { exp_xy, chebyshev_sum };
enum class DeltaPolicy { heuristic, fixed };

struct SmoothKernelConfig {
  KernelKind kernel = KernelKind::exp_xy;
  Index n = 0;  // 0 -> 900 for exp_xy, 1000 for chebyshev_sum
  std::vector<Index> l_values;  // empty -> {5,10,...,40} / {12,18,24}
  DeltaPolicy delta_policy = DeltaPolicy::heuristic;
  double fixed_delta = 1e-10;
  double floor_delta = 1e-15;
  int trials = 10;
  std::uint64_t seed = 0;
  std::uint64_t coeff_seed = 2025;
  bool emit_coefficient_decay = true;  // exp_xy only: eps_k/eps1_k versus k
  Index coeff_k_max = 25;
  bool timing = true;
  int threads = 0;
};
ExperimentOutput run_smoothkernel(const SmoothKernelConfig& config);

enum class ComparisonModel { toy_logspace, exact_rank };

struct ComparisonConfig {
  ComparisonModel model = ComparisonModel::toy_logspace;
  Index n = 301;
  Index k = 9;
  double eps_k = 1e-8;
  Index l = 0;  // 0 -> recommended_l capped at n
  std::vector<std::string> algorithms;  // empty -> all four
  double floor_delta = 1e-15;
  int trials = 50;
  std::uint64_t seed = 0;
  bool timing = true;
  int threads = 0;
};
ExperimentOutput run_comparison(const ComparisonConfig& config);

struct ValidationConfig {
  int lift_instances = 500;
  Index lift_max_n = 40;
  int mc_trials = 1000;
  std::uint64_t seed = 0;
  /// Self-test hook: scales the right-hand sides of the lift inequalities
  /// before checking slack. 1.0 means no corruption; the negative test uses
  /// < 1 to prove failures are detected.
  double corrupt_scale = 1.0;
};

struct ValidationReport {
  struct Item {
    std::string name;
    bool pass = false;
    std::string details;
  };
  std::vector<Item> items;
  bool pass = true;
};

ValidationReport run_validation(const ValidationConfig& config);
void print_report(std::ostream& out, const ValidationReport& report);

}  // namespace sklab
