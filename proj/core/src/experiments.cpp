#include "sklab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sklab/linalg.hpp"
#include "sklab/sampling.hpp"

namespace sklab {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0, Clock::time_point t1) {
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

std::vector<double> decade_grid(int lo_exp, int hi_exp) {
  std::vector<double> g;
  for (int e = lo_exp; e <= hi_exp; ++e) g.push_back(std::pow(10.0, e));
  return g;
}

// Mean of err2 per grid value, for the slope fits in the CSV comments.
std::vector<double> mean_by_key(const std::vector<ExperimentRecord>& recs,
                                const std::function<bool(const ExperimentRecord&)>& select,
                                const std::function<double(const ExperimentRecord&)>& key,
                                const std::vector<double>& keys) {
  std::vector<double> mean(keys.size(), 0.0);
  std::vector<int> count(keys.size(), 0);
  for (const auto& r : recs) {
    if (!select(r)) continue;
    const double kv = key(r);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (kv == keys[i]) {
        mean[i] += r.err2;
        ++count[i];
        break;
      }
    }
  }
  for (std::size_t i = 0; i < keys.size(); ++i)
    mean[i] = count[i] ? mean[i] / count[i] : std::numeric_limits<double>::quiet_NaN();
  return mean;
}

}  // namespace

std::string csv_header() {
  return "experiment,trial,seed,m,n,l,k,delta,err2,err2_rel,eps_k,eps1_k,"
         "runtime_ms,algorithm_tag,entry_reads";
}

void write_csv(std::ostream& out, const ExperimentOutput& output) {
  for (const auto& c : output.comments) out << "# " << c << "\n";
  out << csv_header() << "\n";
  for (const auto& r : output.records) {
    out << r.experiment << ',' << r.trial << ',' << r.seed << ',' << r.m << ',' << r.n
        << ',' << r.l << ',' << r.k << ',' << fmt(r.delta) << ',' << fmt(r.err2) << ','
        << fmt(r.err2_rel) << ',' << fmt(r.eps_k) << ',' << fmt(r.eps1_k) << ','
        << fmt(r.runtime_ms) << ',' << r.algorithm_tag << ',' << r.entry_reads << "\n";
  }
}

void write_csv_file(const std::string& path, const ExperimentOutput& output) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv_file: cannot open " + path);
  write_csv(out, output);
  if (!out) throw std::runtime_error("write_csv_file: write failed for " + path);
}

void parallel_trials(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int t = 0; t < count; ++t) fn(t);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= count) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log10(x[i]), ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------- models

BenchModel toy_fourier_model(Index n, Index k, double eps_k) {
  auto built = synthetic_fourier_source(SyntheticModelSpec::log_spaced(n, k, eps_k));
  BenchModel m;
  m.source = built.source;
  m.model = std::move(built.model);
  m.norm2 = 1.0;
  m.eps_k = eps_k;  // the model is its own SVD: eps_k = sigma_{k+1}
  m.eps1_k = static_cast<double>(n - k) * eps_k;
  return m;
}

BenchModel flat_head_model(Index n, Index k, double eps) {
  auto built = synthetic_fourier_source(SyntheticModelSpec::flat_head(n, k, eps));
  BenchModel m;
  m.source = built.source;
  m.model = std::move(built.model);
  m.norm2 = 1.0;
  m.eps_k = eps;
  m.eps1_k = static_cast<double>(n - k) * eps;
  return m;
}

BenchModel exact_rank_model(Index n, Index k, Basis basis, std::uint64_t seed) {
  SyntheticModelSpec spec = SyntheticModelSpec::flat_head(n, k, 0.0, basis);
  spec.seed = seed;
  auto built = synthetic_fourier_source(spec);
  BenchModel m;
  m.source = built.source;
  m.model = std::move(built.model);
  m.norm2 = 1.0;
  m.eps_k = 0.0;
  m.eps1_k = 0.0;
  return m;
}

BenchModel exp_kernel_model(Index n) {
  const std::vector<double> grid = uniform_grid(n);
  auto raw = kernel_source([](double x, double y) { return std::exp(x * y); }, grid, grid);
  Matrix dense = materialize(*raw);
  const double nrm = spectral_norm(dense, 1e-10, 500).value;
  dense /= nrm;
  BenchModel m;
  m.source = dense_source(dense);
  m.norm2 = 1.0;
  return m;
}

BenchModel chebyshev_kernel_model(Index n, std::uint64_t coeff_seed,
                                  std::vector<double>* coeffs, double* scale) {
  const std::vector<double> grid = uniform_grid(n);
  Rng rng(coeff_seed);

  // T_1..T_6 and T_10 evaluated on the grid.
  RealMatrix T(n, 7);
  for (Index i = 0; i < n; ++i) {
    const double a = std::acos(std::clamp(grid[static_cast<std::size_t>(i)], -1.0, 1.0));
    for (int d = 1; d <= 6; ++d) T(i, d - 1) = std::cos(d * a);
    T(i, 6) = std::cos(10 * a);
  }

  RealMatrix C(6, 6);
  std::vector<double> cs;
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j) {
      C(i, j) = rng.gaussian();
      cs.push_back(C(i, j));
    }

  RealMatrix A = T.leftCols(6) * C * T.leftCols(6).transpose();
  A += 1e-3 * T.col(6) * T.col(6).transpose();
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) A(i, j) += 1e-9 * rng.gaussian();

  Matrix Ac = A.cast<Complex>();
  const double nrm = spectral_norm(Ac, 1e-10, 500).value;
  Ac /= nrm;

  if (coeffs) *coeffs = cs;
  if (scale) *scale = 1.0 / nrm;

  BenchModel m;
  m.source = dense_source(Ac);
  m.norm2 = 1.0;
  return m;
}

SkeletonDecomposition skeleton_uniform_k3_heuristic(const MatrixSource& A, Index l,
                                                    Index k, double floor_delta,
                                                    Rng& rng, double* delta_out) {
  const Index m = A.rows(), n = A.cols();
  if (l < 1 || l > std::min(m, n))
    throw std::invalid_argument("skeleton_uniform_k3_heuristic: l out of range");
  if (k < 1 || k >= l)
    throw std::invalid_argument("skeleton_uniform_k3_heuristic: need 1 <= k < l");
  if (!(floor_delta > 0.0))
    throw std::invalid_argument("skeleton_uniform_k3_heuristic: floor must be > 0");

  SkeletonDecomposition s;
  s.seed = rng.seed();
  s.col_indices = sample_uniform(n, l, rng);
  s.row_indices = sample_uniform(m, l, rng);
  const Matrix A_RC = A.submatrix(s.row_indices.indices, s.col_indices.indices);
  const double delta = std::max(heuristic_delta(A_RC, m, n, l, k), floor_delta);
  s.core = pinv_threshold(A_RC, delta);
  s.source_rows = m;
  s.source_cols = n;
  s.delta_used = delta;
  s.algorithm_tag = AlgorithmTag::uniform_k3;
  if (delta_out) *delta_out = delta;
  return s;
}

// ---------------------------------------------------------------- drivers

ExperimentOutput run_vcurve(const VCurveConfig& config) {
  VCurveConfig cfg = config;
  if (cfg.deltas.empty()) cfg.deltas = decade_grid(-13, -2);
  if (cfg.n < 2) throw ConfigError("vcurve: n must be >= 2");
  if (cfg.l < 1 || cfg.l > cfg.n) throw ConfigError("vcurve: l out of range");
  if (cfg.trials < 0) throw ConfigError("vcurve: trials must be >= 0");
  if (!(cfg.eps_k > 0.0)) throw ConfigError("vcurve: eps_k must be > 0");
  if (cfg.ks.empty()) throw ConfigError("vcurve: need at least one k");
  for (Index k : cfg.ks)
    if (k < 1 || k >= cfg.n) throw ConfigError("vcurve: k out of range");
  for (double d : cfg.deltas)
    if (!(d > 0.0)) throw ConfigError("vcurve: delta must be > 0");

  std::vector<BenchModel> models;
  models.reserve(cfg.ks.size());
  for (Index k : cfg.ks) models.push_back(toy_fourier_model(cfg.n, k, cfg.eps_k));

  struct Task {
    std::size_t ki, di;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t ki = 0; ki < cfg.ks.size(); ++ki)
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di)
      for (int rep = 0; rep < cfg.trials; ++rep) tasks.push_back({ki, di, rep});

  ExperimentOutput out;
  out.records.resize(tasks.size());
  parallel_trials(static_cast<int>(tasks.size()), cfg.threads, [&](int t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    const BenchModel& model = models[task.ki];
    const double delta = cfg.deltas[task.di];
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));

    auto counted = counting_source(model.source);
    const auto t0 = Clock::now();
    const SkeletonDecomposition s = skeleton_uniform_k3(*counted, cfg.l, delta, rng);
    const auto t1 = Clock::now();

    ExperimentRecord& r = out.records[static_cast<std::size_t>(t)];
    r.experiment = "vcurve";
    r.trial = t;
    r.seed = rng.seed();
    r.m = cfg.n;
    r.n = cfg.n;
    r.l = cfg.l;
    r.k = cfg.ks[task.ki];
    r.delta = delta;
    r.err2 = approximation_error_2norm(*model.source, s);
    r.err2_rel = r.err2 / model.norm2;
    r.eps_k = model.eps_k;
    r.eps1_k = model.eps1_k;
    r.runtime_ms = cfg.timing ? elapsed_ms(t0, t1) : 0.0;
    r.algorithm_tag = to_string(s.algorithm_tag);
    r.entry_reads = counted->reads();
  });

  out.comments.push_back("experiment=vcurve n=" + std::to_string(cfg.n) +
                         " l=" + std::to_string(cfg.l) + " eps_k=" + fmt(cfg.eps_k) +
                         " trials=" + std::to_string(cfg.trials) +
                         " seed=" + std::to_string(cfg.seed));

  // Per-k slope fits on the canonical branches of the V.
  if (cfg.trials > 0) {
    const std::vector<std::pair<double, double>> branches = {{1e-12, 1e-10}, {1e-6, 1e-3}};
    for (std::size_t ki = 0; ki < cfg.ks.size(); ++ki) {
      const Index k = cfg.ks[ki];
      const auto mean = mean_by_key(
          out.records, [&](const ExperimentRecord& r) { return r.k == k; },
          [](const ExperimentRecord& r) { return r.delta; }, cfg.deltas);
      double vmin = std::numeric_limits<double>::infinity();
      double vmin_delta = 0.0;
      for (std::size_t di = 0; di < cfg.deltas.size(); ++di)
        if (mean[di] < vmin) {
          vmin = mean[di];
          vmin_delta = cfg.deltas[di];
        }
      if (std::isfinite(vmin))
        out.comments.push_back("vmin k=" + std::to_string(k) + " delta=" + fmt(vmin_delta) +
                               " err2=" + fmt(vmin));
      for (const auto& [lo, hi] : branches) {
        std::vector<double> xs, ys;
        for (std::size_t di = 0; di < cfg.deltas.size(); ++di)
          if (cfg.deltas[di] >= lo * (1 - 1e-12) && cfg.deltas[di] <= hi * (1 + 1e-12) &&
              std::isfinite(mean[di]) && mean[di] > 0) {
            xs.push_back(cfg.deltas[di]);
            ys.push_back(mean[di]);
          }
        if (xs.size() >= 2)
          out.comments.push_back("fit k=" + std::to_string(k) + " delta_range=[" + fmt(lo) +
                                 "," + fmt(hi) + "] slope=" + fmt(fit_loglog_slope(xs, ys)));
      }
    }
  }
  return out;
}

ExperimentOutput run_scaling(const ScalingConfig& config) {
  const ScalingConfig& cfg = config;
  if (cfg.ns.empty()) throw ConfigError("scaling: need at least one n");
  if (cfg.k < 1) throw ConfigError("scaling: k must be >= 1");
  if (cfg.trials < 0) throw ConfigError("scaling: trials must be >= 0");
  for (Index n : cfg.ns) {
    if (n <= cfg.k) throw ConfigError("scaling: n must exceed k");
    if (cfg.l < 1 || cfg.l > n) throw ConfigError("scaling: l out of range");
  }
  for (double e : cfg.eps_list)
    if (!(e > 0.0)) throw ConfigError("scaling: eps must be > 0 (delta would vanish)");

  std::vector<BenchModel> models;  // indexed ns x eps
  for (Index n : cfg.ns)
    for (double e : cfg.eps_list) models.push_back(flat_head_model(n, cfg.k, e));

  struct Task {
    std::size_t ni, ei;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t ni = 0; ni < cfg.ns.size(); ++ni)
    for (std::size_t ei = 0; ei < cfg.eps_list.size(); ++ei)
      for (int rep = 0; rep < cfg.trials; ++rep) tasks.push_back({ni, ei, rep});

  ExperimentOutput out;
  out.records.resize(tasks.size());
  parallel_trials(static_cast<int>(tasks.size()), cfg.threads, [&](int t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    const Index n = cfg.ns[task.ni];
    const double eps = cfg.eps_list[task.ei];
    const BenchModel& model = models[task.ni * cfg.eps_list.size() + task.ei];
    const double delta = eps * static_cast<double>(cfg.l) / std::sqrt(static_cast<double>(n));
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));

    auto counted = counting_source(model.source);
    const auto t0 = Clock::now();
    const SkeletonDecomposition s = skeleton_uniform_k3(*counted, cfg.l, delta, rng);
    const auto t1 = Clock::now();

    ExperimentRecord& r = out.records[static_cast<std::size_t>(t)];
    r.experiment = "scaling";
    r.trial = t;
    r.seed = rng.seed();
    r.m = n;
    r.n = n;
    r.l = cfg.l;
    r.k = cfg.k;
    r.delta = delta;
    r.err2 = approximation_error_2norm(*model.source, s);
    r.err2_rel = r.err2 / model.norm2;
    r.eps_k = eps;
    r.eps1_k = model.eps1_k;
    r.runtime_ms = cfg.timing ? elapsed_ms(t0, t1) : 0.0;
    r.algorithm_tag = to_string(s.algorithm_tag);
    r.entry_reads = counted->reads();
  });

  out.comments.push_back("experiment=scaling k=" + std::to_string(cfg.k) +
                         " l=" + std::to_string(cfg.l) +
                         " trials=" + std::to_string(cfg.trials) +
                         " seed=" + std::to_string(cfg.seed) + " delta=eps*l/sqrt(n)");
  if (cfg.ns.size() >= 2 && cfg.trials > 0) {
    std::vector<double> nsd(cfg.ns.begin(), cfg.ns.end());
    for (double e : cfg.eps_list) {
      const auto mean = mean_by_key(
          out.records, [&](const ExperimentRecord& r) { return r.eps_k == e; },
          [](const ExperimentRecord& r) { return static_cast<double>(r.n); }, nsd);
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < nsd.size(); ++i)
        if (std::isfinite(mean[i]) && mean[i] > 0) {
          xs.push_back(nsd[i]);
          ys.push_back(mean[i]);
        }
      if (xs.size() >= 2)
        out.comments.push_back("fit eps=" + fmt(e) +
                               " slope_vs_n=" + fmt(fit_loglog_slope(xs, ys)));
    }
  }
  return out;
}

ExperimentOutput run_smoothkernel(const SmoothKernelConfig& config) {
  SmoothKernelConfig cfg = config;
  if (cfg.n == 0) cfg.n = (cfg.kernel == KernelKind::exp_xy) ? 900 : 1000;
  if (cfg.l_values.empty()) {
    if (cfg.kernel == KernelKind::exp_xy)
      cfg.l_values = {5, 10, 15, 20, 25, 30, 35, 40};
    else
      cfg.l_values = {12, 18, 24};
  }
  if (cfg.trials < 0) throw ConfigError("smoothkernel: trials must be >= 0");
  for (Index l : cfg.l_values)
    if (l < 2 || l > cfg.n) throw ConfigError("smoothkernel: l out of range");
  if (cfg.delta_policy == DeltaPolicy::fixed && !(cfg.fixed_delta > 0.0))
    throw ConfigError("smoothkernel: fixed delta must be > 0");

  ExperimentOutput out;
  BenchModel model;
  if (cfg.kernel == KernelKind::exp_xy) {
    model = exp_kernel_model(cfg.n);
    out.comments.push_back("experiment=smoothkernel kernel=exp_xy n=" + std::to_string(cfg.n) +
                           " seed=" + std::to_string(cfg.seed) + " (matrix scaled to ||A||=1)");
  } else {
    std::vector<double> cs;
    double scale = 1.0;
    model = chebyshev_kernel_model(cfg.n, cfg.coeff_seed, &cs, &scale);
    std::ostringstream line;
    line << "experiment=smoothkernel kernel=chebyshev_sum n=" << cfg.n
         << " coeff_seed=" << cfg.coeff_seed << " scale=" << fmt(scale) << " coeffs=";
    for (std::size_t i = 0; i < cs.size(); ++i) line << (i ? ";" : "") << fmt(cs[i]);
    out.comments.push_back(line.str());
  }
  out.comments.push_back(cfg.delta_policy == DeltaPolicy::heuristic
                             ? std::string("delta_policy=heuristic k=max(1,l/2-2) floor=") +
                                   fmt(cfg.floor_delta)
                             : std::string("delta_policy=fixed delta=") + fmt(cfg.fixed_delta));

  struct Task {
    std::size_t li;
    int rep;
  };
  std::vector<Task> tasks;
  for (std::size_t li = 0; li < cfg.l_values.size(); ++li)
    for (int rep = 0; rep < cfg.trials; ++rep) tasks.push_back({li, rep});

  out.records.resize(tasks.size());
  parallel_trials(static_cast<int>(tasks.size()), cfg.threads, [&](int t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    const Index l = cfg.l_values[task.li];
    const Index k = std::max<Index>(1, l / 2 - 2);
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));

    auto counted = counting_source(model.source);
    double delta = cfg.fixed_delta;
    const auto t0 = Clock::now();
    SkeletonDecomposition s =
        cfg.delta_policy == DeltaPolicy::heuristic
            ? skeleton_uniform_k3_heuristic(*counted, l, k, cfg.floor_delta, rng, &delta)
            : skeleton_uniform_k3(*counted, l, cfg.fixed_delta, rng);
    const auto t1 = Clock::now();

    ExperimentRecord& r = out.records[static_cast<std::size_t>(t)];
    r.experiment = "smoothkernel";
    r.trial = t;
    r.seed = rng.seed();
    r.m = cfg.n;
    r.n = cfg.n;
    r.l = l;
    r.k = (cfg.delta_policy == DeltaPolicy::heuristic) ? k : 0;
    r.delta = delta;
    r.err2 = approximation_error_2norm(*model.source, s);
    r.err2_rel = r.err2 / model.norm2;
    r.runtime_ms = cfg.timing ? elapsed_ms(t0, t1) : 0.0;
    r.algorithm_tag = to_string(s.algorithm_tag);
    r.entry_reads = counted->reads();
  });

  // Coefficient decay in the Legendre-derived bases (the eps_k / eps1_k
  // versus k panel). One dense pass; the bases are real.
  if (cfg.kernel == KernelKind::exp_xy && cfg.emit_coefficient_decay) {
    const std::vector<double> grid = uniform_grid(cfg.n);
    const Matrix X = legendre_orthonormal_basis(grid, cfg.n);
    const Matrix G = X.adjoint() * materialize(*model.source) * X;
    const Index kmax = std::min(cfg.coeff_k_max, cfg.n - 1);
    int trial = static_cast<int>(out.records.size());
    for (Index k = 1; k <= kmax; ++k) {
      Matrix delta_block = G;
      delta_block.topLeftCorner(k, k).setZero();
      ExperimentRecord r;
      r.experiment = "kernel_coeffs";
      r.trial = trial++;
      r.seed = cfg.seed;
      r.m = cfg.n;
      r.n = cfg.n;
      r.l = 0;
      r.k = k;
      r.eps_k = spectral_norm(delta_block, 1e-8, 500).value;
      r.eps1_k = delta_block.cwiseAbs().sum();
      out.records.push_back(std::move(r));
    }
  }
  return out;
}

ExperimentOutput run_comparison(const ComparisonConfig& config) {
  ComparisonConfig cfg = config;
  if (cfg.n < 4) throw ConfigError("comparison: n too small");
  if (cfg.k < 1 || cfg.k >= cfg.n) throw ConfigError("comparison: k out of range");
  if (cfg.trials < 0) throw ConfigError("comparison: trials must be >= 0");
  if (cfg.algorithms.empty())
    cfg.algorithms = {"uniform_k3", "rrqr_mnk", "rows_rrqr_nk2", "colsvd"};
  for (const auto& a : cfg.algorithms) algorithm_tag_from_string(a);  // validates

  BenchModel model = cfg.model == ComparisonModel::toy_logspace
                         ? toy_fourier_model(cfg.n, cfg.k, cfg.eps_k)
                         : exact_rank_model(cfg.n, cfg.k, Basis::unitary_dft);
  const double mu = coherence(model.model.X1);
  Index l = cfg.l;
  if (l == 0) l = std::min(recommended_l(mu, cfg.k, cfg.n), cfg.n);
  if (l < cfg.k + 1 || l > cfg.n) throw ConfigError("comparison: l out of range");
  const double floor = cfg.floor_delta * model.norm2;

  const std::size_t per_trial = cfg.algorithms.size();
  ExperimentOutput out;
  out.records.resize(static_cast<std::size_t>(cfg.trials) * per_trial);
  parallel_trials(cfg.trials, cfg.threads, [&](int trial) {
    const std::uint64_t seed_t = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    for (std::size_t ai = 0; ai < per_trial; ++ai) {
      const AlgorithmTag tag = algorithm_tag_from_string(cfg.algorithms[ai]);
      Rng rng(seed_t);  // identical seed for every algorithm in the trial
      auto counted = counting_source(model.source);

      double delta = std::numeric_limits<double>::quiet_NaN();
      double err = 0.0;
      const auto t0 = Clock::now();
      Clock::time_point t1;
      switch (tag) {
        case AlgorithmTag::uniform_k3: {
          SkeletonDecomposition s =
              skeleton_uniform_k3_heuristic(*counted, l, cfg.k, floor, rng, &delta);
          t1 = Clock::now();
          err = approximation_error_2norm(*model.source, s);
          break;
        }
        case AlgorithmTag::rrqr_mnk: {
          SkeletonDecomposition s = skeleton_rrqr_mnk(*counted, l, cfg.k, rng);
          t1 = Clock::now();
          err = approximation_error_2norm(*model.source, s);
          break;
        }
        case AlgorithmTag::rows_rrqr_nk2: {
          SkeletonDecomposition s = skeleton_rows_rrqr_nk2(*counted, l, cfg.k, rng);
          t1 = Clock::now();
          err = approximation_error_2norm(*model.source, s);
          break;
        }
        case AlgorithmTag::colsvd: {
          // Scout sample sets the split: sigma_{k+1}(A_RC) scaled up by
          // sqrt(n/l) estimates sigma_{k+1}(A_{:C}), the quantity delta
          // thresholds here.
          const IndexSample cs = sample_uniform(cfg.n, l, rng);
          const IndexSample rs = sample_uniform(cfg.n, l, rng);
          const Matrix A_RC = counted->submatrix(rs.indices, cs.indices);
          const double lambda = static_cast<double>(cfg.n) / static_cast<double>(l);
          const double sigma_next = heuristic_delta(A_RC, cfg.n, cfg.n, l, cfg.k) / lambda;
          delta = std::max(std::sqrt(lambda) * sigma_next, floor);
          LowRankFactorization f = skeleton_colsvd(*counted, l, delta, rng);
          t1 = Clock::now();
          err = approximation_error_2norm(*model.source, f);
          break;
        }
        default:
          throw ConfigError("comparison: unsupported algorithm " + cfg.algorithms[ai]);
      }

      ExperimentRecord& r =
          out.records[static_cast<std::size_t>(trial) * per_trial + ai];
      r.experiment = "comparison";
      r.trial = trial;
      r.seed = seed_t;
      r.m = cfg.n;
      r.n = cfg.n;
      r.l = l;
      r.k = cfg.k;
      r.delta = delta;
      r.err2 = err;
      r.err2_rel = err / model.norm2;
      r.eps_k = model.eps_k;
      r.eps1_k = model.eps1_k;
      r.runtime_ms = cfg.timing ? elapsed_ms(t0, t1) : 0.0;
      r.algorithm_tag = cfg.algorithms[ai];
      r.entry_reads = counted->reads();
    }
  });

  out.comments.push_back(
      "experiment=comparison model=" +
      std::string(cfg.model == ComparisonModel::toy_logspace ? "toy_logspace" : "exact_rank") +
      " n=" + std::to_string(cfg.n) + " k=" + std::to_string(cfg.k) +
      " eps_k=" + fmt(model.eps_k) + " l=" + std::to_string(l) +
      " trials=" + std::to_string(cfg.trials) + " seed=" + std::to_string(cfg.seed));
  return out;
}

}  // namespace sklab
