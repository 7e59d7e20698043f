#include <cmath>
#include <iostream>
#include <sstream>

#include "sklab/experiments.hpp"
#include "sklab/linalg.hpp"
#include "sklab/sampling.hpp"

namespace sklab {

namespace {

constexpr double kSlackFloor = -1e-10;

struct LiftInstance {
  Matrix A;  // normalized to ||A|| = 1
  Matrix X;  // m x m Haar unitary
  Matrix Y;  // n x n Haar unitary
  Index k = 0;
  IndexSample R, C;
};

LiftInstance random_instance(Rng& rng, Index max_n, bool need_rows) {
  LiftInstance inst;
  const Index m = 6 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_n - 5)));
  const Index n = 6 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_n - 5)));
  inst.k = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::min(m, n) - 1)));

  Matrix G(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) G(i, j) = Complex(rng.gaussian(), rng.gaussian());
  inst.A = G / Eigen::JacobiSVD<Matrix>(G).singularValues()(0);

  inst.X = haar_unitary(m, rng);
  inst.Y = haar_unitary(n, rng);

  // Distinct indices (the lift lemmas select via permutation-submatrix
  // selectors); Haar bases make the selected blocks full rank a.s.
  const Index lc = inst.k + static_cast<Index>(
                                rng.below(static_cast<std::uint64_t>(n - inst.k + 1)));
  inst.C = sample_uniform(n, lc, rng, /*with_replacement=*/false);
  if (need_rows) {
    const Index lr = inst.k + static_cast<Index>(
                                  rng.below(static_cast<std::uint64_t>(m - inst.k + 1)));
    inst.R = sample_uniform(m, lr, rng, /*with_replacement=*/false);
  }
  return inst;
}

struct SlackStats {
  double min_slack = std::numeric_limits<double>::infinity();
  int violations = 0;
  int evaluated = 0;

  void fold(double slack) {
    min_slack = std::min(min_slack, slack);
    if (slack < kSlackFloor) ++violations;
    ++evaluated;
  }

  std::string describe() const {
    std::ostringstream s;
    s << "instances=" << evaluated << " min_slack=" << min_slack
      << " violations=" << violations;
    return s.str();
  }
};

}  // namespace

ValidationReport run_validation(const ValidationConfig& config) {
  if (config.lift_instances < 0 || config.mc_trials < 0 || config.lift_max_n < 8)
    throw ConfigError("validation: bad configuration");
  const double scale = config.corrupt_scale;

  ValidationReport report;
  auto add = [&](const std::string& name, bool pass, const std::string& details) {
    report.items.push_back({name, pass, details});
    report.pass = report.pass && pass;
  };

  {
    SlackStats stats;
    for (int i = 0; i < config.lift_instances; ++i) {
      Rng rng(derive_seed(config.seed, 0x11000000ULL + static_cast<std::uint64_t>(i)));
      const LiftInstance inst = random_instance(rng, config.lift_max_n, false);
      const LiftReport rep = check_lift_column(inst.A, inst.Y, inst.k, inst.C);
      stats.fold(rep.rhs * scale - rep.lhs);
    }
    add("lift_column", stats.violations == 0, stats.describe());
  }

  {
    SlackStats stats;
    for (int i = 0; i < config.lift_instances; ++i) {
      Rng rng(derive_seed(config.seed, 0x22000000ULL + static_cast<std::uint64_t>(i)));
      const LiftInstance inst = random_instance(rng, config.lift_max_n, true);
      const LiftReport rep = check_lift_rowcol(inst.A, inst.X, inst.Y, inst.k, inst.R, inst.C);
      stats.fold(rep.rhs * scale - rep.lhs);
    }
    add("lift_rowcol", stats.violations == 0, stats.describe());
  }

  {
    SlackStats plain, squared;
    for (int i = 0; i < config.lift_instances; ++i) {
      Rng rng(derive_seed(config.seed, 0x33000000ULL + static_cast<std::uint64_t>(i)));
      const LiftInstance inst = random_instance(rng, config.lift_max_n, false);
      const ProjectionLiftReport rep = check_lift_projection(inst.A, inst.Y, inst.k, inst.C);
      plain.fold(rep.plain.rhs * scale - rep.plain.lhs);
      squared.fold(rep.squared.rhs * scale - rep.squared.lhs);
    }
    add("lift_projection", plain.violations == 0, plain.describe());
    add("lift_projection_strengthened", squared.violations == 0, squared.describe());
  }

  {
    // In-regime check: incoherent basis, l from the sampling rule.
    const Index n = 1024, k = 4;
    const Index l = std::min(recommended_l(1.0, k, n), n);
    Rng rng(derive_seed(config.seed, 0x44000000ULL));
    const McBoundsReport rep =
        montecarlo_sampling_bounds(n, k, l, Basis::unitary_dft, config.mc_trials, rng);
    std::ostringstream details;
    details << "n=" << n << " k=" << k << " l=" << l << " trials=" << rep.trials
            << " failure_freq=" << rep.failure_freq << " bound=" << rep.theorem_bound
            << "+" << rep.mc_slack;
    add("montecarlo_bounds_dft", rep.pass, details.str());
  }

  {
    // Out-of-regime demonstration: maximally coherent basis fails the
    // two-norm events most of the time.
    Rng rng(derive_seed(config.seed, 0x55000000ULL));
    const int trials = std::min(config.mc_trials, 200);
    const McBoundsReport rep =
        montecarlo_sampling_bounds(64, 4, 8, Basis::identity_spike, trials, rng);
    std::ostringstream details;
    details << "n=64 k=4 l=8 mu=" << rep.mu << " failure_freq=" << rep.failure_freq
            << " (coherent basis, events expected to fail)";
    add("montecarlo_bounds_spike_demo", rep.failure_freq >= 0.5, details.str());
  }

  return report;
}

void print_report(std::ostream& out, const ValidationReport& report) {
  for (const auto& item : report.items)
    out << (item.pass ? "PASS" : "FAIL") << "  " << item.name << ": " << item.details << "\n";
  out << (report.pass ? "validation passed" : "validation FAILED") << " ("
      << report.items.size() << " checks)\n";
}

}  // namespace sklab
